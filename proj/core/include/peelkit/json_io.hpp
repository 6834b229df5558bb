#ifndef PEELKIT_JSON_IO_HPP
#define PEELKIT_JSON_IO_HPP

#include <string>

#include "peelkit/lattice_sim.hpp"
#include "peelkit/peeling.hpp"
#include "peelkit/polytope.hpp"

namespace peelkit {

// All emitters produce two-space-indented JSON with a trailing newline;
// object keys come out sorted, so identical values give identical bytes.

/// { "dim": d, "tol": t, "vertices": [[...]], "halfspaces": [{"normal":[...],
/// "offset": b}, ...] }. Vertices are ambient; halfspaces optional on input
/// and recomputed from the vertices (when present they are validated).
std::string polytope_to_json(const Polytope& P);
Polytope polytope_from_json(const std::string& text);

std::string decomposition_to_json(const PeelDecomposition& dec);
PeelDecomposition decomposition_from_json(const std::string& text);

std::string certificate_to_json(const PeelCertificate& cert);

std::string trace_to_json(const sim::ProofTrace& trace);

std::string expansion_to_json(const sim::Expansion& expansion);

/// Parse and re-emit with the canonical formatting; the identity on
/// anything this library emitted.
std::string reformat_json(const std::string& text);

} // namespace peelkit

#endif
