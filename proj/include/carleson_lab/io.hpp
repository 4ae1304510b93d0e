#pragma once

#include <iosfwd>
#include <string>

#include "carleson_lab/measures.hpp"

namespace clab {

/// Domain documents, one JSON object with a "kind" and kind-specific keys:
///   {"kind": "disk", "collar": 0.2, "form": "squared"}
///   {"kind": "ball", "dimension": 2}
///   {"kind": "ellipsoid", "exponents": [1,2], "semi_axes": [1,1], "collar": 0.2}
///   {"kind": "polynomial", "dimension": 1, "box_half_width": 1.2, "anchor": [0,0],
///    "terms": [{"coeff": 1, "powers": [2,0]}, {"coeff": 1, "powers": [0,2]}, {"coeff": -1, "powers": [0,0]}]}
/// "collar" is optional everywhere; unknown keys are rejected.
DomainSpec parse_domain(const std::string& text);
DomainSpec load_domain(const std::string& path);

/// Canonical single-line JSON for a domain (used in config echoes).
std::string domain_json(const DomainSpec& spec);

/// Atomic measure CSV: 2n coordinate columns x1,y1,...,xn,yn then a weight column.
/// An optional header line and lines starting with '#' are skipped.
Measure read_atomic_csv(const DomainSpec& spec, std::istream& is);
void write_atomic_csv(std::ostream& os, const Measure& mu, int n);

/// The whole contents of a file; ConfigError when it cannot be read.
std::string read_file(const std::string& path);

}  // namespace clab
