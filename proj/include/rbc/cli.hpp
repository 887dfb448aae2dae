#pragma once

#include <rbc/expr.hpp>
#include <rbc/metric.hpp>
#include <rbc/schwarz.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace rbc {

inline constexpr const char* kToolVersion = "1.0.0";

/// Runs the command line; returns the process exit code
/// (0 success, 2 usage or input error, 3 when --fail-on triggers).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Comma-separated complex literals: a, a+bi, bi.
Point parse_point(const std::string& text);
cplx parse_complex(const std::string& text);

/// name, name:key=val,... or a path to a metric JSON file. `defaults` fill
/// catalog parameters not given inline.
MetricSpec resolve_metric(const std::string& ref, const ParamMap& defaults = {});

/// identity, map:expr;expr;... or a path to a map JSON file.
MapSpec resolve_map(const std::string& ref, int domain_dim);

} // namespace rbc
