#pragma once

#include <cstdint>
#include <random>

#include "hpr/algebra.hpp"

namespace hpr {

/// splitmix64 step; used to derive independent named streams from a master
/// seed so that every trial is reproducible regardless of scheduling.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                    std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(master ^ 0x8c62f7314a5bd3e9ull);
    s = splitmix64(s ^ splitmix64(a));
    s = splitmix64(s ^ splitmix64(b ^ 0x5851f42d4c957f2dull));
    s = splitmix64(s ^ splitmix64(c ^ 0x14057b7ef767814full));
    return s;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal(double stddev = 1.0) { return stddev * normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::uint64_t integer(std::uint64_t bound) {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
    }

    template <class S>
    S normal_scalar(double component_stddev) {
        S out{};
        for (int i = 0; i < algebra_traits<S>::dim; ++i) out.set_coeff(i, normal(component_stddev));
        return out;
    }

    template <class S>
    Vec<S> normal_vector(std::size_t n, double component_stddev) {
        Vec<S> out(n);
        for (S& e : out) e = normal_scalar<S>(component_stddev);
        return out;
    }

    template <class S>
    S unit_scalar() {
        S s{};
        double n2 = 0.0;
        while (n2 < 1e-12) {
            s = normal_scalar<S>(1.0);
            n2 = norm2(s);
        }
        return s * (1.0 / std::sqrt(n2));
    }

    std::vector<double> normal_reals(std::size_t n, double stddev = 1.0) {
        std::vector<double> out(n);
        for (double& v : out) v = normal(stddev);
        return out;
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace hpr
