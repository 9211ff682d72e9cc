#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

namespace qid {

struct CheckResult {
    std::string name;
    double tolerance = 0.0;
    double max_violation = 0.0;
    std::variant<double, std::array<double, 2>> witness = 0.0;
    bool pass = false;
};

/// Ordered list of named checks with the verified run configuration.
/// Serialized with a fixed field order and 17-significant-digit floats so
/// certificates are byte-stable artifacts.
struct Certificate {
    int n = 1;
    double delta = 0.0;
    double abs_tol = 1e-8;
    long long seed = 0;
    std::string version = "0.1.0";
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::string to_json() const;
};

/// Make a check entry; pass = (max_violation <= tolerance).
CheckResult make_check(std::string name, double tolerance, double max_violation,
                       std::variant<double, std::array<double, 2>> witness);

} // namespace qid
