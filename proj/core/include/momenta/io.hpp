#pragma once

#include <optional>
#include <string>
#include <vector>

#include "momenta/bipoly.hpp"
#include "momenta/rational.hpp"

namespace momenta {

// ---- moment files ----
// # component j
// # eps-order k
// # recurrence-hash <hex|none>
// n,p/q        (n ascending from 0, no gaps)

struct MomentFileData {
    int component = 1;
    int eps_order = 0;
    std::string recurrence_hash = "none";
    std::vector<Rational> values;
};

MomentFileData read_moment_file(const std::string& path);
void write_moment_file(const std::string& path, const MomentFileData& data);

// ---- recurrence files ----
// order d
// a_0: <polynomial in n and ep>
// ...
// a_d: <...>
// rhs: <moment-file path>        (optional)

struct RecurrenceFileData {
    std::vector<BiPoly> coeffs;  // in n, ascending shift, size order+1
    std::optional<std::string> rhs_path;
};

RecurrenceFileData read_recurrence_file(const std::string& path);
void write_recurrence_file(const std::string& path, const RecurrenceFileData& data);

/// Canonical one-line serialization of the coefficient list; input for the
/// recurrence hash stored in moment-file headers.
std::string recurrence_repr(const std::vector<BiPoly>& coeffs);

/// FNV-1a 64-bit hash, lowercase hex.
std::string fnv1a_hex(const std::string& text);

} // namespace momenta
