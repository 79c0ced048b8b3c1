#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "momenta/provider.hpp"
#include "momenta/ratfunc.hpp"

namespace momenta {

/// Coupled first-order system  h_i(x,ep) * D_x f_i = sum_j A_ij f_j + g_i.
/// The lhs multipliers default to 1, matching the plain D_x f = A f + g form;
/// they let callers write systems without pre-clearing row denominators.
struct CoupledSystem {
    int lambda = 0;
    std::vector<RatFunc> lhs;     // size lambda
    std::vector<RatFunc> matrix;  // row-major, size lambda^2
    std::vector<MomentProvider> rhs;
    std::string name;
    std::map<int, EpsWindow> windows;  // optional per-component defaults (1-based)

    const RatFunc& entry(int i, int j) const {  // 1-based
        return matrix[static_cast<std::size_t>((i - 1) * lambda + (j - 1))];
    }
};

/// Per (component, ep-order) initial values c_{j,k,0}, c_{j,k,1}, ...
struct InitialValues {
    std::map<std::pair<int, int>, std::vector<Rational>> values;

    std::span<const Rational> get(int component, int eps_order) const {
        auto it = values.find({component, eps_order});
        if (it == values.end())
            return {};
        return it->second;
    }
    void set(int component, int eps_order, std::vector<Rational> vals) {
        values[{component, eps_order}] = std::move(vals);
    }
};

/// Parses the JSON system document (fields: lambda, matrix, rhs, optional
/// lhs/name/windows).  Validation errors carry the offending location.
CoupledSystem parse_system(const std::string& json_text);
CoupledSystem load_system(const std::string& path);
std::string system_repr(const CoupledSystem& sys);

InitialValues parse_initial_values(const std::string& json_text);
InitialValues load_initial_values(const std::string& path);

} // namespace momenta
