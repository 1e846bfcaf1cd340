#include <doctest.h>

#include <cmath>

#include "hpr/algebra.hpp"
#include "hpr/rng.hpp"

using namespace hpr;

namespace {

double vec_err(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("hamilton product basics") {
    const Quaternion i = Quaternion::unit(1);
    const Quaternion j = Quaternion::unit(2);
    const Quaternion k = Quaternion::unit(3);
    CHECK(i * j == k);
    CHECK(j * i == -k);
    CHECK(i * i == Quaternion(-1));

    const Quaternion x(1, 2, 3, 4);
    CHECK(conj(x) == Quaternion(1, -2, -3, -4));

    const Quaternion y(1, 1, 1, 1);
    CHECK(abs(y) == doctest::Approx(2.0));
    CHECK(approx_equal(y * inverse(y), Quaternion(1), 1e-15));
}

TEST_CASE("quaternion conj modulus inverse sign") {
    CHECK(conj(Quaternion{}) == Quaternion{});
    CHECK(abs(Quaternion{}) == 0.0);
    CHECK_THROWS_AS(inverse(Quaternion{}), std::domain_error);
    CHECK_THROWS_AS(sign(Quaternion{}), std::domain_error);
    CHECK(approx_equal(sign(Quaternion(0, 3)), Quaternion(0, 1), 1e-15));
}

TEST_CASE("octonion identity and table from the gimel columns") {
    const Octonion e0 = Octonion::unit(0);
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const Octonion x = rng.normal_scalar<Octonion>(1.0);
        CHECK(abs(omul(e0, x) - x) == doctest::Approx(0.0));
        CHECK(abs(omul(x, e0) - x) == doctest::Approx(0.0));
    }

    // e1 e2 read off the gimel(e1) column holding aleph(e2)
    const Octonion e1 = Octonion::unit(1);
    const Octonion e2 = Octonion::unit(2);
    const RealMatrix g = gimel(e1);
    const std::vector<double> expect = matvec(g, aleph(e2));
    CHECK(vec_err(aleph(omul(e1, e2)), expect) == doctest::Approx(0.0));
    CHECK(omul(e1, e2) == -Octonion::unit(3));
}

TEST_CASE("octonion scalar definitions") {
    CHECK(approx_equal(inverse(Octonion(2.0)), Octonion(0.5), 1e-15));
    Octonion x;
    x.set_coeff(0, 1);
    x.set_coeff(1, 1);
    x.set_coeff(2, 1);
    x.set_coeff(3, 1);
    CHECK(abs(x) == doctest::Approx(2.0));
    CHECK_THROWS_AS(inverse(Octonion{}), std::domain_error);
    CHECK_THROWS_AS(sign(Octonion{}), std::domain_error);
    CHECK(conj(Octonion{}) == Octonion{});

    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const Octonion o = rng.normal_scalar<Octonion>(1.0);
        CHECK(abs(omul(o, inverse(o)) - Octonion(1.0)) < 1e-12);
        CHECK(std::abs(abs(sign(o)) - 1.0) < 1e-14);
        // conjugation is an involution and |x|^2 = x x*
        CHECK(conj(conj(o)) == o);
        const Octonion xxs = omul(o, conj(o));
        CHECK(std::abs(xxs.coeff(0) - norm2(o)) <= 1e-12 * norm2(o));
        for (int i = 1; i < 8; ++i) CHECK(std::abs(xxs.coeff(i)) <= 1e-12 * norm2(o));
    }
}

TEST_CASE("norm multiplicativity over 1e4 random pairs") {
    Rng rng(11);
    double worst_q = 0.0, worst_o = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const Quaternion qa = rng.normal_scalar<Quaternion>(1.0);
        const Quaternion qb = rng.normal_scalar<Quaternion>(1.0);
        worst_q = std::max(worst_q,
                           std::abs(abs(qa * qb) - abs(qa) * abs(qb)) / (abs(qa) * abs(qb)));
        const Octonion oa = rng.normal_scalar<Octonion>(1.0);
        const Octonion ob = rng.normal_scalar<Octonion>(1.0);
        worst_o = std::max(worst_o,
                           std::abs(abs(omul(oa, ob)) - abs(oa) * abs(ob)) / (abs(oa) * abs(ob)));
    }
    CHECK(worst_q <= 1e-12);
    CHECK(worst_o <= 1e-12);
}

TEST_CASE("associativity, alternativity and a non-associativity witness") {
    Rng rng(13);
    double worst_assoc = 0.0, worst_alt = 0.0, witness = 0.0;
    for (int t = 0; t < 10000; ++t) {
        const Quaternion a = rng.normal_scalar<Quaternion>(1.0);
        const Quaternion b = rng.normal_scalar<Quaternion>(1.0);
        const Quaternion c = rng.normal_scalar<Quaternion>(1.0);
        worst_assoc = std::max(worst_assoc,
                               abs((a * b) * c - a * (b * c)) / (abs(a) * abs(b) * abs(c)));

        const Octonion x = rng.normal_scalar<Octonion>(1.0);
        const Octonion y = rng.normal_scalar<Octonion>(1.0);
        const Octonion xx = omul(x, x);
        worst_alt = std::max(worst_alt,
                             abs(omul(xx, y) - omul(x, omul(x, y))) / (norm2(x) * abs(y)));
        worst_alt = std::max(worst_alt,
                             abs(omul(omul(y, x), x) - omul(y, xx)) / (norm2(x) * abs(y)));
    }
    for (int t = 0; t < 100; ++t) {
        const Octonion x = rng.unit_scalar<Octonion>();
        const Octonion y = rng.unit_scalar<Octonion>();
        const Octonion z = rng.unit_scalar<Octonion>();
        witness = std::max(witness, abs(omul(omul(x, y), z) - omul(x, omul(y, z))));
    }
    CHECK(worst_assoc <= 1e-12);
    CHECK(worst_alt <= 1e-12);
    CHECK(witness > 0.1);
}

TEST_CASE("aleph and gimel") {
    CHECK(aleph(Octonion::unit(0)) == std::vector<double>{1, 0, 0, 0, 0, 0, 0, 0});
    const RealMatrix g0 = gimel(Octonion::unit(0));
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c) CHECK(g0(r, c) == (r == c ? 1.0 : 0.0));

    Rng rng(17);
    SUBCASE("homomorphism aleph(Ax) = gimel(A) aleph(x)") {
        for (int t = 0; t < 200; ++t) {
            Matrix<Octonion> A(3, 2);
            for (Octonion& e : A.data) e = rng.normal_scalar<Octonion>(1.0);
            const Vec<Octonion> x = rng.normal_vector<Octonion>(2, 1.0);
            CHECK(vec_err(aleph(matvec(A, x)), matvec(gimel(A), aleph(x))) < 1e-12);

            Matrix<Quaternion> B(3, 2);
            for (Quaternion& e : B.data) e = rng.normal_scalar<Quaternion>(1.0);
            const Vec<Quaternion> qx = rng.normal_vector<Quaternion>(2, 1.0);
            CHECK(vec_err(aleph(matvec(B, qx)), matvec(gimel(B), aleph(qx))) < 1e-12);
        }
    }
    SUBCASE("norm preservation and round trip") {
        for (int t = 0; t < 100; ++t) {
            const Vec<Octonion> x = rng.normal_vector<Octonion>(5, 1.0);
            const std::vector<double> v = aleph(x);
            double n = 0.0;
            for (double e : v) n += e * e;
            CHECK(std::abs(std::sqrt(n) - norm(x)) <= 1e-12 * norm(x));
            const Vec<Octonion> back = aleph_inv<Octonion>(v);
            REQUIRE(back.size() == x.size());
            for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == x[i]);
        }
        CHECK_THROWS_AS(aleph_inv<Octonion>(std::vector<double>(13, 0.0)), std::invalid_argument);
    }
    SUBCASE("gimel^T gimel = |x|^2 I") {
        for (int t = 0; t < 200; ++t) {
            const Octonion x = rng.normal_scalar<Octonion>(1.0);
            const RealMatrix g = gimel(x);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) {
                    double acc = 0.0;
                    for (int k = 0; k < 8; ++k) acc += g(k, i) * g(k, j);
                    CHECK(std::abs(acc - (i == j ? norm2(x) : 0.0)) <= 1e-12 * norm2(x));
                }
        }
    }
}

TEST_CASE("hermitian adjoint") {
    Rng rng(19);
    Matrix<Quaternion> A(3, 4);
    for (Quaternion& e : A.data) e = rng.normal_scalar<Quaternion>(1.0);
    const Matrix<Quaternion> AH = hermitian_adjoint(A);
    const Matrix<Quaternion> back = hermitian_adjoint(AH);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) CHECK(back(i, j) == A(i, j));

    Matrix<Quaternion> one(1, 1);
    one(0, 0) = Quaternion(0, 1);
    CHECK(hermitian_adjoint(one)(0, 0) == Quaternion(0, -1));

    // diag(A A^*) is real and nonnegative
    for (std::size_t i = 0; i < A.rows; ++i) {
        Quaternion acc;
        for (std::size_t j = 0; j < A.cols; ++j) acc += A(i, j) * AH(j, i);
        CHECK(acc.coeff(0) >= 0.0);
        for (int comp = 1; comp < 4; ++comp)
            CHECK(std::abs(acc.coeff(comp)) < 1e-12 * acc.coeff(0));
    }
}

TEST_CASE("quaternion rotation") {
    Rng rng(23);
    const Quaternion i = Quaternion::unit(1);
    const Quaternion j = Quaternion::unit(2);
    for (int t = 0; t < 50; ++t) {
        const Quaternion x = rng.normal_scalar<Quaternion>(1.0);
        CHECK(approx_equal(rotate(x, Quaternion(1)), x, 1e-14));
        const Quaternion mu = rng.normal_scalar<Quaternion>(1.0);
        // real part and modulus preserved
        const Quaternion rx = rotate(x, mu);
        CHECK(std::abs(rx.coeff(0) - x.coeff(0)) < 1e-12 * std::max(1.0, abs(x)));
        CHECK(std::abs(abs(rx) - abs(x)) < 1e-12 * std::max(1.0, abs(x)));
        // reals commute with everything
        const Quaternion real_x(x.coeff(0));
        CHECK(approx_equal(rotate(real_x, mu), real_x, 1e-12));
    }
    CHECK(approx_equal(rotate(i, j), -i, 1e-15));
    CHECK_THROWS_AS(rotate(i, Quaternion{}), std::domain_error);
}

TEST_CASE("matrix-vector multiplication order is left") {
    // single-entry sanity: (A x)_0 = A_00 * x_0, not x_0 * A_00
    Matrix<Quaternion> A(1, 1);
    A(0, 0) = Quaternion::unit(1);  // i
    const Vec<Quaternion> x{Quaternion::unit(2)};  // j
    CHECK(matvec(A, x)[0] == Quaternion::unit(3));  // i j = k
}
