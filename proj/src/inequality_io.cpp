#include "tricausal/inequality_io.hpp"

#include "tricausal/errors.hpp"

#include <cctype>
#include <sstream>

namespace tricausal {
namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string outcomes_text(const std::vector<int>& outcomes) {
    bool wide = false;
    for (int o : outcomes) wide = wide || o > 9;
    std::string out;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (wide && k) out += ",";
        out += std::to_string(outcomes[k]);
    }
    return out;
}

Factor parse_factor(const std::string& text) {
    // P[v1,v2,...](o1o2...)
    auto t = trim(text);
    if (t.size() < 5 || t[0] != 'P' || t[1] != '[') throw InputError("expected P[...](...), got '" + t + "'");
    auto close = t.find(']');
    if (close == std::string::npos || close + 1 >= t.size() || t[close + 1] != '(' || t.back() != ')') {
        throw InputError("malformed factor '" + t + "'");
    }
    Factor f;
    std::istringstream vars(t.substr(2, close - 2));
    std::string name;
    while (std::getline(vars, name, ',')) f.vars.push_back(NodeId::parse(trim(name)));
    std::string outs = t.substr(close + 2, t.size() - close - 3);
    if (outs.find(',') != std::string::npos) {
        std::istringstream os(outs);
        std::string o;
        while (std::getline(os, o, ',')) f.outcomes.push_back(std::stoi(trim(o)));
    } else {
        for (char c : outs) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw InputError("bad outcome in '" + t + "'");
            f.outcomes.push_back(c - '0');
        }
    }
    if (f.vars.size() != f.outcomes.size()) throw InputError("factor arity mismatch in '" + t + "'");
    return f;
}

}  // namespace

std::string format_rational(const Rational& r) {
    auto num = boost::multiprecision::numerator(r);
    auto den = boost::multiprecision::denominator(r);
    std::string s = (num >= 0 ? "+" : "") + num.str();
    if (den != 1) s += "/" + den.str();
    return s;
}

Rational parse_rational(const std::string& text) {
    auto t = trim(text);
    if (!t.empty() && t[0] == '+') t = t.substr(1);
    if (t.empty()) throw InputError("empty coefficient");
    auto slash = t.find('/');
    try {
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(t));
        return Rational(boost::multiprecision::cpp_int(t.substr(0, slash)),
                        boost::multiprecision::cpp_int(t.substr(slash + 1)));
    } catch (const std::exception&) {
        throw InputError("bad coefficient '" + text + "'");
    }
}

PolynomialInequality parse_inequality(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Term> terms;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty() || line == ">= 0" || line == "0") continue;
        std::vector<std::string> parts;
        std::size_t depth = 0, start = 0;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '[' || line[i] == '(') ++depth;
            if (line[i] == ']' || line[i] == ')') --depth;
            if (line[i] == '*' && depth == 0) {
                parts.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        }
        parts.push_back(line.substr(start));
        Term t;
        t.coefficient = parse_rational(parts[0]);
        for (std::size_t k = 1; k < parts.size(); ++k) t.factors.push_back(parse_factor(parts[k]));
        terms.push_back(std::move(t));
    }
    return PolynomialInequality(std::move(terms));
}

std::string format_inequality(const PolynomialInequality& ineq) {
    std::string out = "# sum of terms >= 0\n";
    if (ineq.is_zero()) return out + "0\n";
    for (const auto& t : ineq.terms()) {
        out += format_rational(t.coefficient);
        for (const auto& f : t.factors) {
            out += " * P[";
            for (std::size_t k = 0; k < f.vars.size(); ++k) out += (k ? "," : "") + f.vars[k].str();
            out += "](" + outcomes_text(f.outcomes) + ")";
        }
        out += "\n";
    }
    return out;
}

std::string pretty_inequality(const PolynomialInequality& ineq, int terms_per_line) {
    if (ineq.is_zero()) return "0 >= 0\n";
    std::string out;
    int on_line = 0;
    for (const auto& t : ineq.terms()) {
        std::string coef = format_rational(t.coefficient);
        if (coef == "+1" && !t.factors.empty()) coef = "+";
        else if (coef == "-1" && !t.factors.empty()) coef = "-";
        else if (!t.factors.empty()) coef += " ";
        if (on_line > 0) out += " ";
        out += coef;
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
            const auto& f = t.factors[i];
            if (i) out += " ";
            out += "P_{";
            for (std::size_t k = 0; k < f.vars.size(); ++k) out += (k ? " " : "") + f.vars[k].str();
            out += "}(" + outcomes_text(f.outcomes) + ")";
        }
        if (++on_line == terms_per_line) {
            out += "\n";
            on_line = 0;
        }
    }
    if (on_line != 0) out += "\n";
    return out + ">= 0\n";
}

}  // namespace tricausal
