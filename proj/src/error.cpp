#include "nlfb/error.hpp"

namespace nlfb {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "invalid-parameter";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Regime: return "regime";
        case ErrorKind::Precondition: return "precondition";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::Resolution: return "resolution";
        case ErrorKind::NoRoot: return "no-root";
        case ErrorKind::SearchRange: return "search-range";
        case ErrorKind::DegenerateDomain: return "degenerate-domain";
        case ErrorKind::NumericalBlowup: return "numerical-blowup";
        case ErrorKind::Stability: return "stability";
        case ErrorKind::SolverFailure: return "solver-failure";
        case ErrorKind::LinearAlgebra: return "linear-algebra";
        case ErrorKind::Inconclusive: return "inconclusive";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace nlfb
