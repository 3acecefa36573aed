#include "ltevid/airlink/equalizer.hpp"

#include <limits>
#include <string>

namespace ltevid::airlink {
namespace {

EqualizedGrid zero_force(const ResourceGrid& rx, std::span<const Complex> h, double noise_var, bool throw_on_null) {
    if (h.size() != rx.subcarriers()) throw ContractError("equalize: one channel coefficient per subcarrier");
    EqualizedGrid out{ResourceGrid(rx.subcarriers(), rx.symbols()), std::vector<double>(h.size())};
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double mag2 = std::norm(h[k]);
        if (mag2 == 0.0) {
            if (throw_on_null) throw DeepNullError("equalize: channel null on subcarrier " + std::to_string(k));
            out.noise_var[k] = std::numeric_limits<double>::infinity();
            continue;
        }
        out.noise_var[k] = noise_var / mag2;
        const Complex inv = 1.0 / h[k];
        for (std::size_t s = 0; s < rx.symbols(); ++s) out.grid.at(k, s) = rx.at(k, s) * inv;
    }
    return out;
}

}  // namespace

EqualizedGrid equalize(const ResourceGrid& rx, std::span<const Complex> h, double noise_var) {
    return zero_force(rx, h, noise_var, true);
}

EqualizedGrid equalize_with_erasures(const ResourceGrid& rx, std::span<const Complex> h, double noise_var) {
    return zero_force(rx, h, noise_var, false);
}

}  // namespace ltevid::airlink
