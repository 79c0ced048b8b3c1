#include "momenta/provider.hpp"

#include <climits>
#include <sstream>

#include "momenta/io.hpp"
#include "momenta/propagate.hpp"

namespace momenta {

struct MomentProvider::Impl {
    Kind kind;
    std::optional<EpsWindow> window;

    std::map<int, Rational> constants;
    std::map<int, HarmonicExpr> harmonics;
    std::map<int, std::vector<Rational>> file_rows;
    std::map<int, RecurrenceLayer> rec_layers;
    std::vector<std::pair<PolyFrac, MomentProvider>> composite_terms;
};

namespace {

void check_order(const MomentProvider::Impl& impl, int k) {
    if (impl.window && !impl.window->contains(k))
        fail(ErrorClass::window_shortfall,
             "ep-order " + std::to_string(k) + " outside provider window [" +
                 std::to_string(impl.window->lo) + ", " + std::to_string(impl.window->hi) + "]");
}

constexpr long kUnbounded = LONG_MAX / 4;

} // namespace

MomentProvider MomentProvider::zero() {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::constant;
    impl->window = std::nullopt;
    return MomentProvider(std::move(impl));
}

MomentProvider MomentProvider::constant(std::map<int, Rational> values,
                                        std::optional<EpsWindow> window) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::constant;
    impl->window = window;
    impl->constants = std::move(values);
    for (const auto& [k, v] : impl->constants)
        check_order(*impl, k);
    return MomentProvider(std::move(impl));
}

MomentProvider MomentProvider::harmonic(std::map<int, HarmonicExpr> expressions,
                                        std::optional<EpsWindow> window) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::harmonic;
    impl->window = window;
    impl->harmonics = std::move(expressions);
    for (const auto& [k, v] : impl->harmonics)
        check_order(*impl, k);
    return MomentProvider(std::move(impl));
}

MomentProvider MomentProvider::from_files(std::vector<std::string> paths,
                                          std::optional<EpsWindow> window) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::file;
    int lo = INT_MAX, hi = INT_MIN;
    for (const auto& path : paths) {
        MomentFileData data = read_moment_file(path);
        if (impl->file_rows.count(data.eps_order))
            fail(ErrorClass::parse_error,
                 "duplicate ep-order " + std::to_string(data.eps_order) + " in file provider");
        lo = std::min(lo, data.eps_order);
        hi = std::max(hi, data.eps_order);
        impl->file_rows[data.eps_order] = std::move(data.values);
    }
    if (window)
        impl->window = window;
    else if (!impl->file_rows.empty())
        impl->window = EpsWindow{lo, hi};
    else
        fail(ErrorClass::degenerate_input, "file provider without files needs an explicit window");
    return MomentProvider(std::move(impl));
}

MomentProvider MomentProvider::recurrence_backed(std::map<int, RecurrenceLayer> layers,
                                                 std::optional<EpsWindow> window) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::recurrence;
    impl->window = window;
    impl->rec_layers = std::move(layers);
    for (const auto& [k, v] : impl->rec_layers)
        check_order(*impl, k);
    return MomentProvider(std::move(impl));
}

MomentProvider MomentProvider::composite(
    std::vector<std::pair<PolyFrac, MomentProvider>> terms,
    std::optional<EpsWindow> window) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::composite;
    impl->window = window;
    impl->composite_terms = std::move(terms);
    return MomentProvider(std::move(impl));
}

MomentProvider::Kind MomentProvider::kind() const { return impl_->kind; }

const std::optional<EpsWindow>& MomentProvider::window() const { return impl_->window; }

long MomentProvider::capacity(int k) const {
    check_order(*impl_, k);
    switch (impl_->kind) {
        case Kind::constant:
        case Kind::harmonic:
            return kUnbounded;
        case Kind::file: {
            auto it = impl_->file_rows.find(k);
            if (it == impl_->file_rows.end())
                return kUnbounded;  // in-window missing order: zero stream
            return static_cast<long>(it->second.size()) - 1;
        }
        case Kind::recurrence: {
            auto it = impl_->rec_layers.find(k);
            if (it == impl_->rec_layers.end())
                return kUnbounded;
            const RecurrenceLayer& rl = it->second;
            if (rl.rhs.empty())
                return kUnbounded;
            return static_cast<long>(rl.rhs.size()) - 1 + rl.rec.order() + rl.rec.rhs_offset;
        }
        case Kind::composite: {
            long cap = kUnbounded;
            for (const auto& [coeff, sub] : impl_->composite_terms)
                cap = std::min(cap, sub.capacity(k));
            return cap;
        }
    }
    return 0;
}

std::vector<Rational> MomentProvider::moments(int k, long mu) const {
    check_order(*impl_, k);
    if (mu < 0)
        fail(ErrorClass::internal, "negative moment count");
    if (mu > capacity(k))
        fail(ErrorClass::capacity_shortfall,
             "provider holds " + std::to_string(capacity(k) + 1) + " moments at ep-order " +
                 std::to_string(k) + ", requested " + std::to_string(mu + 1));
    std::vector<Rational> out(static_cast<std::size_t>(mu) + 1, Rational(0));
    switch (impl_->kind) {
        case Kind::constant: {
            auto it = impl_->constants.find(k);
            if (it != impl_->constants.end())
                std::fill(out.begin(), out.end(), it->second);
            return out;
        }
        case Kind::harmonic: {
            auto it = impl_->harmonics.find(k);
            if (it != impl_->harmonics.end())
                return it->second.eval_stream(mu);
            return out;
        }
        case Kind::file: {
            auto it = impl_->file_rows.find(k);
            if (it == impl_->file_rows.end())
                return out;
            for (long n = 0; n <= mu; ++n)
                out[static_cast<std::size_t>(n)] = it->second[static_cast<std::size_t>(n)];
            return out;
        }
        case Kind::recurrence: {
            auto it = impl_->rec_layers.find(k);
            if (it == impl_->rec_layers.end())
                return out;
            const RecurrenceLayer& rl = it->second;
            return propagate(rl.rec, rl.rhs, rl.init, mu);
        }
        case Kind::composite: {
            for (const auto& [coeff, sub] : impl_->composite_terms) {
                auto stream = sub.moments(k, mu);
                for (long n = 0; n <= mu; ++n)
                    out[static_cast<std::size_t>(n)] += coeff.eval_int(n) * stream[static_cast<std::size_t>(n)];
            }
            return out;
        }
    }
    fail(ErrorClass::internal, "bad provider kind");
}

std::string MomentProvider::describe() const {
    std::ostringstream os;
    switch (impl_->kind) {
        case Kind::constant: os << "constant"; break;
        case Kind::harmonic: os << "harmonic"; break;
        case Kind::file: os << "file"; break;
        case Kind::recurrence: os << "recurrence"; break;
        case Kind::composite: os << "composite"; break;
    }
    if (impl_->window)
        os << " [" << impl_->window->lo << "," << impl_->window->hi << "]";
    return os.str();
}

} // namespace momenta
