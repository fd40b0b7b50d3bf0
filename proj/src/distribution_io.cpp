#include "tricausal/distribution_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tricausal {
namespace {

class LiteralParser {
public:
    explicit LiteralParser(const std::string& s) : s_(s) {}

    QSqrt2 parse() {
        QSqrt2 v = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw InputError("bad literal '" + s_ + "': " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    QSqrt2 expr() {
        QSqrt2 v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }
    QSqrt2 term() {
        QSqrt2 v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }
    QSqrt2 unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return atom();
    }
    QSqrt2 atom() {
        skip();
        if (eat('(')) {
            QSqrt2 v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (s_.compare(pos_, 5, "sqrt2") == 0) {
            pos_ += 5;
            return QSqrt2::sqrt2();
        }
        if (s_.compare(pos_, 7, "sqrt(2)") == 0) {
            pos_ += 7;
            return QSqrt2::sqrt2();
        }
        std::size_t start = pos_;
        boost::multiprecision::cpp_int whole = 0, frac = 0, scale = 1;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            whole = whole * 10 + (s_[pos_++] - '0');
        }
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                frac = frac * 10 + (s_[pos_++] - '0');
                scale *= 10;
            }
        }
        if (pos_ == start) fail("expected a number");
        Rational v = Rational(whole) + Rational(frac, scale);
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            ++pos_;
            bool neg = false;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
            int e = 0;
            std::size_t estart = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                e = e * 10 + (s_[pos_++] - '0');
                if (e > 400) fail("exponent too large");
            }
            if (pos_ == estart) fail("empty exponent");
            boost::multiprecision::cpp_int p10 = boost::multiprecision::pow(boost::multiprecision::cpp_int(10), e);
            v = neg ? v / Rational(p10) : v * Rational(p10);
        }
        return QSqrt2(v);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

std::string strip_comment(const std::string& line) {
    auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

}  // namespace

QSqrt2 parse_qsqrt2(const std::string& text) { return LiteralParser(text).parse(); }

ExactDistribution parse_distribution(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<NodeId> declared;
    std::vector<int> cards;
    bool have_header = false;
    std::vector<std::pair<std::vector<int>, QSqrt2>> records;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(strip_comment(line));
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "variables") {
            if (have_header) throw InputError("duplicate 'variables' header");
            std::string decl;
            while (ls >> decl) {
                auto colon = decl.find(':');
                if (colon == std::string::npos) throw InputError("expected NAME:CARD, got " + decl);
                declared.push_back(NodeId::parse(decl.substr(0, colon)));
                cards.push_back(std::stoi(decl.substr(colon + 1)));
            }
            if (declared.empty()) throw InputError("'variables' header lists no variables");
            have_header = true;
            continue;
        }
        if (!have_header) throw InputError("line " + std::to_string(lineno) + ": missing header");
        std::vector<int> outcome;
        outcome.push_back(std::stoi(word));
        for (std::size_t k = 1; k < declared.size(); ++k) {
            int o;
            if (!(ls >> o)) throw InputError("line " + std::to_string(lineno) + ": short outcome tuple");
            outcome.push_back(o);
        }
        std::string rest;
        std::getline(ls, rest);
        records.emplace_back(std::move(outcome), parse_qsqrt2(rest));
    }
    if (!have_header) throw InputError("distribution file has no 'variables' header");

    EventSpace space(declared, cards);
    std::vector<int> perm;  // declared position -> space position
    for (const auto& v : declared) perm.push_back(space.position(v));
    std::vector<QSqrt2> probs(space.event_count());
    std::set<std::uint64_t> seen;
    std::vector<int> sorted(declared.size());
    for (const auto& [outcome, value] : records) {
        for (std::size_t k = 0; k < outcome.size(); ++k) sorted[static_cast<std::size_t>(perm[k])] = outcome[k];
        auto idx = space.encode(sorted);
        if (!seen.insert(idx).second) throw InputError("event listed twice in distribution file");
        probs[idx] = value;
    }
    return ExactDistribution(std::move(space), std::move(probs));
}

namespace {

template <typename T, typename Fmt>
std::string format_any(const BasicDistribution<T>& p, Fmt fmt) {
    const auto& space = p.space();
    std::string out = "variables";
    for (std::size_t k = 0; k < space.size(); ++k) {
        out += " " + space.variables()[k].str() + ":" + std::to_string(space.cardinalities()[k]);
    }
    out += "\n";
    for (std::uint64_t j = 0; j < space.event_count(); ++j) {
        if (p.at(j) == T(0)) continue;
        for (int o : space.decode(j)) out += std::to_string(o) + " ";
        out += fmt(p.at(j)) + "\n";
    }
    return out;
}

}  // namespace

std::string format_distribution(const ExactDistribution& p) {
    return format_any(p, [](const QSqrt2& v) { return v.str(); });
}

std::string format_distribution(const Distribution& p) {
    return format_any(p, [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    });
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << contents;
    if (!out) throw InputError("write failed for " + path);
}

}  // namespace tricausal
