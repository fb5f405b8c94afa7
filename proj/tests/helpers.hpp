#pragma once

#include <cstdio>
#include <string>

#include "plapcert/problem.hpp"

namespace testing {

/// p = 2, g = 1, B = 0, zero Robin constants; f supplied by the caller.
inline plapcert::ProblemSpec::Terms linear_terms(const std::string& f1 = "1", const std::string& f2 = "1") {
    plapcert::ProblemSpec::Terms t{};
    t.p1 = 2.0;
    t.p2 = 2.0;
    t.g1 = "1";
    t.g2 = "1";
    t.f1 = f1;
    t.f2 = f2;
    t.B1 = "0";
    t.B2 = "0";
    t.b1 = 2.0 / 3.0;
    t.a2 = 0.25;
    t.b2 = 0.75;
    t.h11 = t.h12 = t.h21 = t.h22 = 0.0;
    return t;
}

inline plapcert::ProblemConfig example() { return plapcert::parse_config(plapcert::builtin_example_config()); }

inline std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Built-in example with f1, f2 replaced.
inline plapcert::ProblemSpec example_with(const std::string& f1, const std::string& f2) {
    auto terms = example().spec.terms();
    terms.f1 = f1;
    terms.f2 = f2;
    return plapcert::ProblemSpec(terms);
}

}  // namespace testing
