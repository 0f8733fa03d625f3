#include "tqb/error.hpp"

namespace tqb {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::degenerate_domain: return "degenerate domain";
    case Errc::domain_too_coarse: return "domain too coarse";
    case Errc::invalid_order: return "invalid derivative order";
    case Errc::theta_degenerate: return "degenerate basis normalization";
    case Errc::unknown_model: return "unknown model";
    case Errc::missing_parameter: return "missing parameter";
    case Errc::unknown_parameter: return "unknown parameter";
    case Errc::invalid_boundary_plan: return "invalid boundary plan";
    case Errc::degenerate_boundary_pair: return "degenerate boundary pair";
    case Errc::singular_matrix: return "singular matrix";
    case Errc::dimension_mismatch: return "dimension mismatch";
    case Errc::syntax: return "syntax error";
    case Errc::unknown_identifier: return "unknown identifier";
    case Errc::malformed_sum: return "malformed sum";
    case Errc::evaluation_domain: return "evaluation domain error";
    case Errc::zero_denominator: return "zero denominator";
    case Errc::insufficient_peaks: return "insufficient peaks";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::config: return "configuration error";
  }
  return "unknown error";
}

}  // namespace tqb
