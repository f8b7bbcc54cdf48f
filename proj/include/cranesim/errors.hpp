#pragma once

#include <stdexcept>
#include <string>

namespace cranesim {

struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Actuator extension outside the reachable linkage geometry.
struct OutOfReach : SimError {
    using SimError::SimError;
};

// Tip Jacobian condition number above the configured threshold.
struct SingularConfiguration : SimError {
    using SimError::SimError;
};

// |phi_y| at the cos(phi_y) division guard of the payload model.
struct ConeSingularity : SimError {
    using SimError::SimError;
};

struct BehindCamera : SimError {
    using SimError::SimError;
};

struct InsufficientViews : SimError {
    using SimError::SimError;
};

struct DegenerateGeometry : SimError {
    using SimError::SimError;
};

struct CoincidentMarkers : SimError {
    using SimError::SimError;
};

struct IllConditionedInnovation : SimError {
    using SimError::SimError;
};

struct ConfigError : SimError {
    using SimError::SimError;
};

}  // namespace cranesim
