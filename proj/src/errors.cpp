#include "pas/errors.hpp"

namespace pas {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Size: return "size";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Shape: return "shape";
        case ErrorKind::Range: return "range";
        case ErrorKind::Bracket: return "bracket";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::Budget: return "budget";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

}  // namespace pas
