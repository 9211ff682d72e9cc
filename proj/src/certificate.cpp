#include "qid/certificate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qid {

namespace {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
            out.push_back(c);
        } else {
            out.push_back(c);
        }
    }
    return out;
}

} // namespace

bool Certificate::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

CheckResult make_check(std::string name, double tolerance, double max_violation,
                       std::variant<double, std::array<double, 2>> witness) {
    CheckResult c;
    c.name = std::move(name);
    c.tolerance = tolerance;
    c.max_violation = max_violation;
    c.witness = witness;
    c.pass = max_violation <= tolerance;
    return c;
}

std::string Certificate::to_json() const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"params\": {\"n\": " << n << ", \"delta\": " << fmt_double(delta) << "},\n";
    os << "  \"config\": {\"abs_tol\": " << fmt_double(abs_tol) << ", \"seed\": " << seed
       << "},\n";
    os << "  \"checks\": [\n";
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        os << "    {\"name\": \"" << escape(c.name) << "\", \"tolerance\": "
           << fmt_double(c.tolerance) << ", \"max_violation\": " << fmt_double(c.max_violation)
           << ", \"witness\": ";
        if (std::holds_alternative<double>(c.witness)) {
            os << fmt_double(std::get<double>(c.witness));
        } else {
            const auto& w = std::get<std::array<double, 2>>(c.witness);
            os << "[" << fmt_double(w[0]) << ", " << fmt_double(w[1]) << "]";
        }
        os << ", \"pass\": " << (c.pass ? "true" : "false") << "}";
        os << (i + 1 < checks.size() ? ",\n" : "\n");
    }
    os << "  ],\n";
    os << "  \"all_pass\": " << (all_pass() ? "true" : "false") << ",\n";
    os << "  \"version\": \"" << escape(version) << "\"\n";
    os << "}\n";
    return os.str();
}

} // namespace qid
