#include "zonetrace/error.hpp"

namespace zonetrace {

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Input:
        return 2;
    case ErrorKind::NoLoopFlows:
        return 3;
    case ErrorKind::Numerical:
        return 4;
    }
    return 1;
}

}  // namespace zonetrace
