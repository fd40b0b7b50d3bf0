#include "tricausal/cli.hpp"

#include "tricausal/distribution_io.hpp"
#include "tricausal/errors.hpp"
#include "tricausal/inequality_io.hpp"
#include "tricausal/inflation.hpp"
#include "tricausal/optimize.hpp"
#include "tricausal/structures.hpp"
#include "tricausal/symmetry.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace tricausal::cli {

namespace {

using Json = nlohmann::ordered_json;

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

bool is_file(const std::string& s) { return std::filesystem::is_regular_file(s); }

ExactDistribution load_distribution(const std::string& spec, Manifest& m) {
    if (spec == "fritz") return fritz_distribution();
    if (spec == "uniform") return uniform_abc();
    if (!is_file(spec)) throw InputError("unknown distribution '" + spec + "' (fritz, uniform or a file)");
    m.add_input(spec);
    return parse_distribution(read_file(spec));
}

PolynomialInequality load_inequality(const std::string& spec, Manifest& m) {
    if (spec == "wagon-wheel") return wagon_wheel_inequality();
    if (!is_file(spec)) throw InputError("unknown inequality '" + spec + "' (wagon-wheel or a file)");
    m.add_input(spec);
    return parse_inequality(read_file(spec));
}

CausalStructure load_structure(const std::string& spec, int card, Manifest& m) {
    if (is_file(spec)) {
        m.add_input(spec);
        return structure_from_json(read_file(spec));
    }
    return builtin_structure(spec, card);
}

Inflation load_inflation(const std::string& spec, int card, Manifest& m) {
    if (is_file(spec)) {
        m.add_input(spec);
        return inflation_from_json(read_file(spec));
    }
    return builtin_inflation(spec, card);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string value_text(const QSqrt2& v) { return v.str(); }

Json value_json(const QSqrt2& v) {
    return Json{{"exact", v.str()}, {"approx", v.to_double()}};
}

// 4x4x4 layout rows "a b c value".
std::string grid_data(const Distribution& p, const std::string& header) {
    std::ostringstream os;
    os << "# " << header << "\n# a b c probability\n";
    for (std::uint64_t i = 0; i < p.probs().size(); ++i) {
        os << i / 16 << ' ' << i / 4 % 4 << ' ' << i % 4 << ' ' << fmt(p.at(i)) << '\n';
    }
    return os.str();
}

void check_observables(const CausalStructure& g, const EventSpace& space) {
    const NodeSet obs = g.observable();
    if (NodeSet(space.variables().begin(), space.variables().end()) != obs) {
        throw InputError("distribution variables " + to_string(NodeSet(space.variables().begin(), space.variables().end())) +
                         " differ from the observables " + to_string(obs));
    }
    for (const auto& v : obs) {
        if (space.cardinality(v) != g.cardinality(v)) throw InputError("cardinality of " + v.str() + " differs");
    }
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const IndeterminateError& e) {
        err << "indeterminate: " << e.what() << "\n  primal residual " << e.primal_residual()
            << "\n  certificate value " << e.certificate_value() << '\n';
        return kVerificationError;
    } catch (const VerificationError& e) {
        err << "verification failed: " << e.what() << '\n';
        return kVerificationError;
    } catch (const ObjectiveError& e) {
        err << "objective error: " << e.what() << '\n';
        return kVerificationError;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

}  // namespace

int cmd_derive(const DeriveOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Clock clock;
        Manifest m("derive", c);
        const ExactDistribution p = load_distribution(o.distribution, m);
        const Distribution pd = p.to_double();
        const auto& cards = p.space().cardinalities();
        for (int k : cards) {
            if (k != cards.front()) throw InputError("observables must share one cardinality");
        }
        const CausalStructure g = load_structure(o.structure, cards.front(), m);
        check_observables(g, p.space());
        const Inflation inf = load_inflation(o.inflation, cards.front(), m);
        if (!(inf.original() == g)) throw InputError("inflation is not over the given structure");

        const InflatedScenario sc(inf);
        const std::vector<double> v = sc.marginal_vector(pd);
        Json summary;
        summary["inflation"] = o.inflation;
        summary["distribution"] = o.distribution;
        summary["symmetric"] = o.symmetric;
        summary["rows"] = sc.scenario().row_count();
        summary["columns"] = sc.scenario().joint().event_count();

        FeasibilityProblem problem;
        std::optional<SymmetricIncidence> sym;
        PermGroup original_group;
        if (o.symmetric) {
            const PermGroup group = stabilizer_group(sc.scenario());
            std::map<NodeId, int> obs_cards;
            for (const auto& n : g.observable()) obs_cards[n] = g.cardinality(n);
            original_group = stabilizer_group(MarginalScenario({g.observable()}, obs_cards));
            if (!deflation_consistent(group, original_group)) {
                throw VerificationError("inflated symmetry group does not deflate onto the observable permutations");
            }
            std::ostringstream gs;
            gs << "# order " << group.order() << "\n# generators, cycle notation\n";
            for (const auto& gen : group.generators()) gs << group.cycles(gen) << '\n';
            m.write_output("group.txt", gs.str());
            sym = symmetric_incidence(sc.scenario(), group);
            problem = {sym->matrix, symmetric_marginal_vector(*sym, v)};
            summary["group_order"] = group.order();
            summary["symmetric_rows"] = problem.matrix.rows;
            summary["symmetric_columns"] = problem.matrix.cols;
        } else {
            problem = {incidence_matrix(sc.scenario()), v};
        }
        out << "LP " << problem.matrix.rows << " x " << problem.matrix.cols << '\n';

        LpStats stats;
        const FeasibilityResult result = solve_feasibility(problem, o.lp, &stats);
        summary["lp"] = {{"iterations", stats.iterations},
                         {"refactorizations", stats.refactorizations},
                         {"reduced_rows", stats.reduced_rows},
                         {"reduced_columns", stats.reduced_cols}};

        if (const auto* feas = std::get_if<Feasible>(&result)) {
            summary["verdict"] = "compatible-at-this-inflation";
            summary["residual"] = feas->residual;
            std::ostringstream ws;
            ws << "# column weight (nonzero entries of a witness x >= 0 with M x = v)\n";
            for (std::size_t j = 0; j < feas->witness.size(); ++j) {
                if (feas->witness[j] > 0.0) ws << j << ' ' << fmt(feas->witness[j]) << '\n';
            }
            m.write_output("witness.txt", ws.str());
            m.write_output("summary.json", summary.dump(2) + "\n");
            m.finish(clock.seconds());
            out << "compatible at this inflation (residual " << feas->residual << ")\n";
            return kOk;
        }

        const auto& infeasible = std::get<Infeasible>(result);
        std::optional<VerifiedCertificate> cert;
        if (sym) {
            cert = expand_and_certify(*sym, sc.scenario(), infeasible.certificate, v, o.lp.certificate_margin);
            if (!cert) throw VerificationError("expanded symmetric certificate failed exact verification");
        } else {
            cert = infeasible.certificate;
        }
        const PolynomialInequality ineq = deflate_certificate(*cert, sc);
        const QSqrt2 value = evaluate(ineq, p);
        if (!(value.sign() < 0)) throw VerificationError("deflated inequality is not violated by the distribution");
        if (sym) {
            for (const auto& perm : original_group.elements()) {
                if (!(ineq.relabeled(original_group.to_map(perm)) == ineq)) {
                    throw VerificationError("symmetric inequality is not invariant under " + original_group.cycles(perm));
                }
            }
            summary["party_permutation_invariant"] = true;
        }
        summary["verdict"] = "infeasible";
        summary["certificate_normalized_value"] = cert->normalized_value();
        summary["inequality_terms"] = ineq.terms().size();
        summary["value_on_distribution"] = value_json(value);
        m.write_output("certificate.txt", certificate_to_text(*cert, sc.scenario()));
        m.write_output("inequality.txt", format_inequality(ineq));
        m.write_output("summary.json", summary.dump(2) + "\n");
        m.finish(clock.seconds());
        out << "infeasible: inequality with " << ineq.terms().size() << " terms, value " << value_text(value)
            << " on the distribution\n";
        return kOk;
    });
}

int cmd_eval(const EvalOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Clock clock;
        Manifest m("eval", c);
        const PolynomialInequality ineq = load_inequality(o.inequality, m);
        const ExactDistribution p = load_distribution(o.distribution, m);
        const QSqrt2 value = evaluate(ineq, p);
        const bool violated = value.sign() < 0;
        Json j{{"inequality", o.inequality}, {"distribution", o.distribution}, {"value", value_json(value)},
               {"violated", violated}};
        m.write_output("eval.json", j.dump(2) + "\n");
        m.finish(clock.seconds());
        out << "value " << value_text(value) << " (" << fmt(value.to_double()) << ")\n"
            << (violated ? "violated" : "not violated") << '\n';
        return kOk;
    });
}

int cmd_noise_scan(const NoiseScanOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Clock clock;
        Manifest m("noise-scan", c);
        if (o.grid < 1) throw InputError("grid must be positive");
        const PolynomialInequality ineq = load_inequality(o.inequality, m);
        const NoisyFamily family = fritz_noisy_family();
        if (!(evaluate(ineq, family.base).sign() < 0)) {
            err << "precondition failed: the noiseless distribution does not violate the inequality\n";
            return kPreconditionFailed;
        }
        const NoiseThreshold t = noise_threshold(ineq, family, o.tol, o.grid);
        std::ostringstream curve;
        curve << "# eps value\n";
        for (int i = 0; i <= o.grid; ++i) {
            const double eps = static_cast<double>(i) / o.grid;
            curve << fmt(eps) << ' ' << fmt(evaluate(ineq, noisy_member(family, eps))) << '\n';
        }
        Json j{{"inequality", o.inequality},
               {"epsilon", t.epsilon},
               {"lower", t.lower},
               {"upper", t.upper},
               {"tol", o.tol},
               {"grid", o.grid},
               {"violated_at_one", t.violated_at_one},
               {"non_monotone", t.non_monotone}};
        m.write_output("threshold.json", j.dump(2) + "\n");
        m.write_output("curve.dat", curve.str());
        m.write_output("grid.dat", grid_data(noisy_member(family, t.epsilon), "noisy distribution at eps = " + fmt(t.epsilon)));
        m.finish(clock.seconds());
        out << "eps* " << fmt(t.epsilon) << " in [" << fmt(t.lower) << ", " << fmt(t.upper) << "]\n";
        return kOk;
    });
}

int cmd_optimize(const OptimizeOptions& o, const Common& c, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Clock clock;
        Manifest m("optimize", c);
        const PolynomialInequality ineq = load_inequality(o.inequality, m);
        std::vector<double> seed;
        if (o.seed == "fritz") {
            seed = fritz_strategy_params();
        } else if (o.seed == "random") {
            std::mt19937_64 rng(c.rng_seed);
            seed = random_strategy_params(rng);
        } else if (is_file(o.seed)) {
            m.add_input(o.seed);
            std::istringstream in(read_file(o.seed));
            for (double x; in >> x;) seed.push_back(x);
            if (seed.size() != kStrategyParams) throw InputError("seed file must hold 81 numbers");
        } else {
            throw InputError("unknown seed '" + o.seed + "' (fritz, random or a file)");
        }

        ViolationOptions vo;
        if (o.optimizer == "nelder-mead") {
            vo.optimizer = OptimizerKind::NelderMead;
        } else if (o.optimizer == "bfgs") {
            vo.optimizer = OptimizerKind::Bfgs;
        } else if (o.optimizer == "basin-hopping") {
            vo.optimizer = OptimizerKind::BasinHopping;
        } else {
            throw InputError("unknown optimizer '" + o.optimizer + "'");
        }
        vo.basin.hops = o.hops;
        vo.basin.step = o.step;
        vo.basin.temperature = o.temperature;
        vo.basin.seed = c.rng_seed;
        vo.basin.local_options.max_evaluations = o.budget;
        vo.basin.local_options.workers = c.workers;
        vo.support_threshold = o.support_threshold;
        const ViolationResult r = maximize_violation(ineq, seed, vo);

        const Distribution fritz = fritz_distribution().to_double();
        const auto fritz_support = support_pattern(fritz, o.support_threshold);
        Json j{{"inequality", o.inequality},
               {"seed", o.seed},
               {"optimizer", o.optimizer},
               {"violation", r.violation},
               {"seed_violation", r.seed_violation},
               {"evaluations", r.evaluations},
               {"status", to_string(r.status)},
               {"support_size", std::count(r.support.begin(), r.support.end(), true)},
               {"matches_fritz_support", r.matches_fritz_support},
               {"support_match_stable", r.support_match_stable},
               {"params", r.params}};
        std::ostringstream support, trace;
        support << "# a b c probability in_support in_fritz_support\n";
        for (std::size_t i = 0; i < r.support.size(); ++i) {
            support << i / 16 << ' ' << i / 4 % 4 << ' ' << i % 4 << ' ' << fmt(r.distribution.at(i)) << ' '
                    << r.support[i] << ' ' << fritz_support[i] << '\n';
        }
        trace << "# iteration best_violation\n";
        for (std::size_t i = 0; i < r.violation_trace.size(); ++i) trace << i << ' ' << fmt(r.violation_trace[i]) << '\n';
        m.write_output("result.json", j.dump(2) + "\n");
        m.write_output("distribution.txt", format_distribution(r.distribution));
        m.write_output("support.dat", support.str());
        m.write_output("trace.dat", trace.str());
        m.finish(clock.seconds());
        out << "violation " << fmt(r.violation) << " (seed " << fmt(r.seed_violation) << "), "
            << (r.matches_fritz_support ? "matches" : "differs from") << " the Fritz support\n";
        return kOk;
    });
}

int cmd_show(const std::string& what, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto print_sets = [&](const std::string& name) {
            for (const auto& s : ai_expressible_sets(builtin_inflation(name))) {
                out << to_string(s.members) << "  ->";
                for (const auto& b : s.blocks) out << ' ' << to_string(b);
                out << '\n';
            }
        };
        if (what == "fritz") {
            const ExactDistribution p = fritz_distribution();
            out << format_distribution(p) << "# chsh " << chsh_triangle(p).str() << '\n';
        } else if (what == "wagon-wheel") {
            out << pretty_inequality(wagon_wheel_inequality());
        } else if (what == "wagon-wheel-sets") {
            print_sets("wagon-wheel");
        } else if (what == "web-sets") {
            print_sets("web");
        } else if (what == "web-group") {
            const InflatedScenario sc(builtin_inflation("web"));
            const PermGroup g = stabilizer_group(sc.scenario());
            out << "order " << g.order() << '\n';
            for (const auto& gen : g.generators()) out << g.cycles(gen) << '\n';
        } else {
            throw InputError("unknown item '" + what + "' (fritz, wagon-wheel, wagon-wheel-sets, web-sets, web-group)");
        }
        return kOk;
    });
}

}  // namespace tricausal::cli
