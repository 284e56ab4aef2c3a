#pragma once

#include <stdexcept>

namespace vmrank {

/// Base class for every failure the library reports.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The input file could not be read or is syntactically malformed.
struct parse_error : error {
    using error::error;
};

/// The input parsed but violates the catalog or weight schema
/// (unknown group, duplicate id, non-positive cost, weight out of range).
struct schema_error : error {
    using error::error;
};

/// Structurally valid inputs that do not fit together: unknown ids,
/// missing measurement cells, mismatched VM sets, dimension mismatches.
struct data_error : error {
    using error::error;
};

} // namespace vmrank
