#include "bec/multilinear.hpp"

namespace bec {

MultilinearEngine::MultilinearEngine(const Spectral& spectral) : spectral_(&spectral) {
    const Grid& g = spectral.grid();
    padded_n_ = 2 * g.n_r();
    const double padded_cell = g.cell_volume_r() / static_cast<double>(1u << g.dim_r());
    padded_fft_ = std::make_shared<Fft>(g.dim_r(), padded_n_, 1, padded_cell);
}

std::vector<MultilinearEngine::Mode> MultilinearEngine::modes(const ComplexField& field) const {
    const ComplexField hat = spectral_->forward(field);
    const Grid& g = spectral_->grid();
    std::vector<Mode> out;
    out.reserve(hat.size());
    for (std::size_t i = 0; i < hat.size(); ++i) {
        if (hat[i] == Complex{}) continue;
        out.push_back(Mode{g.mode(i), g.frequency(i), hat[i]});
    }
    return out;
}

ComplexField MultilinearEngine::pad(const ComplexField& field) const {
    const Grid& g = spectral_->grid();
    const ComplexField hat = spectral_->forward(field);
    const int d = g.dim_r();
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(padded_n_);
    ComplexField padded(total, Complex{});
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const Index3 k = g.mode(i);
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) flat = flat * padded_n_ + static_cast<std::size_t>(k[a] < 0 ? k[a] + padded_n_ : k[a]);
        padded[flat] = hat[i];
    }
    padded_fft_->inverse(padded.data());
    return padded;
}

ComplexField MultilinearEngine::truncate(const ComplexField& padded_values) const {
    const Grid& g = spectral_->grid();
    ComplexField spec = padded_values;
    padded_fft_->forward(spec.data());
    const int d = g.dim_r();
    ComplexField hat(spectral_->size());
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const Index3 k = g.mode(i);
        std::size_t flat = 0;
        for (int a = 0; a < d; ++a) flat = flat * padded_n_ + static_cast<std::size_t>(k[a] < 0 ? k[a] + padded_n_ : k[a]);
        hat[i] = spec[flat];
    }
    return spectral_->inverse(std::move(hat));
}

ComplexField MultilinearEngine::product(const ComplexField& f, const ComplexField& g) const {
    spectral_->check_lattice(f.size(), "product");
    spectral_->check_lattice(g.size(), "product");
    ComplexField a = pad(f);
    const ComplexField b = pad(g);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return truncate(a);
}

ComplexField MultilinearEngine::product(const ComplexField& f, const ComplexField& g, const ComplexField& h) const {
    spectral_->check_lattice(f.size(), "product");
    spectral_->check_lattice(g.size(), "product");
    spectral_->check_lattice(h.size(), "product");
    ComplexField a = pad(f);
    const ComplexField b = pad(g);
    const ComplexField c = pad(h);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i] * c[i];
    return truncate(a);
}

} // namespace bec
