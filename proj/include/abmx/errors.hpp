#pragma once

#include <stdexcept>
#include <string>

namespace abmx {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Field name / kind / column-length violations.
struct SchemaError : Error {
    using Error::Error;
};

// num_active or insertions exceeding a fixed capacity.
struct CapacityError : Error {
    using Error::Error;
};

// Value-domain violations (non-finite sort keys on live slots, bad masks).
struct DomainError : Error {
    using Error::Error;
};

// A caller broke an operation precondition (e.g. a move proposal off the road).
struct ContractError : Error {
    using Error::Error;
};

// Bad run configuration: unknown model, unparsable file, invalid key.
struct ConfigError : Error {
    using Error::Error;
};

// Heterogeneous replicas handed to the batch runner.
struct BatchError : Error {
    using Error::Error;
};

} // namespace abmx
