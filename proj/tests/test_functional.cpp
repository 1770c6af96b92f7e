#include "doctest.h"

#include <cmath>

#include "qrm/forward.hpp"
#include "qrm/functional.hpp"
#include "qrm/phantoms.hpp"
#include "support/dense.hpp"
#include "support/spec_builders.hpp"
#include "support/test_rng.hpp"

using namespace qrm;

namespace {

FunctionalSpec zero_data_spec(const SpaceTimeGrid& g, ProblemKind kind = ProblemKind::Phi) {
    FunctionalSpec spec;
    spec.grid = g;
    spec.kind = kind;
    spec.data = CauchyData(g);
    spec.known_init = SpatialField(g);
    return spec;
}

} // namespace

TEST_CASE("residual_stencil identities") {
    SpaceTimeGrid g = make_grid(Extent{0.0, 1.0, 0.0, 1.0, 0.4}, Steps{0.1, 0.1, 1.0 / 15.0});

    SUBCASE("constant fields give exactly zero") {
        Field u(g);
        for (double& v : u.values()) v = 0.731;
        for (int k = 1; k < g.n_t; ++k)
            for (int m = 1; m < g.n_y; ++m)
                for (int n = 1; n < g.n_x; ++n) CHECK(residual_stencil(u, k, m, n) == 0.0);
    }

    SUBCASE("fields linear in time give exactly zero") {
        Field u(g);
        for (int k = 0; k <= g.n_t; ++k)
            for (int m = 0; m <= g.n_y; ++m)
                for (int n = 0; n <= g.n_x; ++n) u(k, m, n) = 0.5 + 0.25 * k;
        for (int k = 1; k < g.n_t; ++k) CHECK(residual_stencil(u, k, 1, 2) == 0.0);
    }

    SUBCASE("u = x1^2 gives the exact quadratic second difference") {
        Field u(g);
        for (int k = 0; k <= g.n_t; ++k)
            for (int m = 0; m <= g.n_y; ++m)
                for (int n = 0; n <= g.n_x; ++n) u(k, m, n) = g.x1(n) * g.x1(n);
        double expected = -2.0 * g.h_t * g.h_t; // -lambda_x * 2 h_x1^2
        for (int m = 1; m < g.n_y; ++m)
            CHECK(residual_stencil(u, 1, m, 3) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("interior bounds are enforced") {
        Field u(g);
        CHECK_THROWS_AS(residual_stencil(u, 0, 1, 1), IndexOutOfInteriorError);
        CHECK_THROWS_AS(residual_stencil(u, 1, g.n_y, 1), IndexOutOfInteriorError);
        CHECK_THROWS_AS(residual_stencil(u, g.n_t, 1, 1), IndexOutOfInteriorError);
    }
}

TEST_CASE("residual_term vanishes on discrete solutions of the scheme") {
    Field zero(make_grid(Extent{0.0, 1.0, 0.0, 1.0, 0.4}, Steps{0.1, 0.1, 1.0 / 15.0}));
    CHECK(residual_term(zero) == 0.0);

    // A forward solve restricted to the inner rectangle satisfies the
    // interior stencil identically, up to roundoff of the re-evaluation.
    double T = 1.0, a = 1.0;
    SpaceTimeGrid fwd = make_grid(Extent{-T, a + T, -T, a + T, T}, Steps{0.1, 0.1, 1.0 / 15.0}, a);
    SpatialField phi = sine_full(fwd), psi(fwd);
    Field sol = solve_forward(make_forward_problem(fwd, phi, psi, 0.0, a));

    SpaceTimeGrid inner = make_grid(Extent{0.0, 1.0, 0.0, 1.0, T}, Steps{0.1, 0.1, 1.0 / 15.0}, a);
    Field restricted(inner);
    int off_m = 10, off_n = 10; // (0 - (-1)) / 0.1
    for (int k = 0; k <= inner.n_t; ++k)
        for (int m = 0; m <= inner.n_y; ++m)
            for (int n = 0; n <= inner.n_x; ++n)
                restricted(k, m, n) = sol(k, off_m + m, off_n + n);
    CHECK(residual_term(restricted) <= 1e-20);
}

TEST_CASE("boundary_misfit counts quadrature cells per the corner convention") {
    SpaceTimeGrid g = make_grid(Extent{0.0, 1.0, 0.0, 1.0, 1.0}, Steps{0.5, 0.5, 0.5});
    CauchyData data(g);
    for (double& v : data.seg(Segment::Gamma1).f) v = 1.0;
    Field u(g);
    auto [trace, flux] = boundary_misfit(u, data);
    // 3 time levels x 3 owned nodes, weight 0.25 each
    CHECK(trace == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(flux == 0.0);

    SUBCASE("exact data give zero misfit") {
        test::TestRng rng(5);
        Field v(g);
        rng.fill(v.values());
        CauchyData exact(g);
        for (Segment s : kSegments) {
            int count = owned_node_count(g, s);
            for (int k = 0; k <= g.n_t; ++k)
                for (int j = 0; j < count; ++j) {
                    NodeIndex b = segment_node(g, s, j);
                    exact.f(s, k, j) = v(k, b.m, b.n);
                    int im = b.m, in = b.n;
                    double hn = 0.0;
                    switch (s) {
                        case Segment::Gamma1: im = b.m + 1; hn = g.h_x2; break;
                        case Segment::Gamma2: in = b.n + 1; hn = g.h_x1; break;
                        case Segment::Gamma3: in = b.n - 1; hn = g.h_x1; break;
                        case Segment::Gamma4: im = b.m - 1; hn = g.h_x2; break;
                    }
                    exact.g(s, k, j) = (v(k, b.m, b.n) - v(k, im, in)) / hn;
                }
        }
        auto [tr, fl] = boundary_misfit(v, exact);
        CHECK(tr == 0.0);
        CHECK(fl == 0.0);
    }
}

TEST_CASE("init_penalty for both problem kinds") {
    SpaceTimeGrid g = make_grid(Extent{0.0, 1.0, 0.0, 1.0, 1.0}, Steps{0.5, 0.5, 0.5});

    SUBCASE("phi problem: constant mismatch") {
        FunctionalSpec spec = zero_data_spec(g, ProblemKind::Phi);
        for (double& v : spec.known_init.values()) v = 1.0;
        Field u(g);
        CHECK(init_penalty(u, spec) == doctest::Approx(2.25).epsilon(1e-14)); // 0.25 * 9
    }

    SUBCASE("phi problem: exact match gives zero") {
        FunctionalSpec spec = zero_data_spec(g, ProblemKind::Phi);
        for (double& v : spec.known_init.values()) v = 0.4;
        Field u(g);
        for (int m = 0; m <= g.n_y; ++m)
            for (int n = 0; n <= g.n_x; ++n) u(1, m, n) = 0.4 * g.h_t;
        CHECK(init_penalty(u, spec) == 0.0);
    }

    SUBCASE("psi problem: u0 = phi_known + x1 costs about 4/3") {
        for (double h : {0.1, 0.05}) {
            SpaceTimeGrid gh = make_grid(Extent{0.0, 1.0, 0.0, 1.0, 1.0}, Steps{h, h, h});
            FunctionalSpec spec = zero_data_spec(gh, ProblemKind::Psi);
            test::TestRng rng(17);
            rng.fill(spec.known_init.values());
            Field u(gh);
            for (int m = 0; m <= gh.n_y; ++m)
                for (int n = 0; n <= gh.n_x; ++n)
                    u(0, m, n) = spec.known_init(m, n) + gh.x1(n);
            CHECK(std::abs(init_penalty(u, spec) - 4.0 / 3.0) <= 3.0 * h);
        }
    }
}

TEST_CASE("evaluate is a quadratic form with the documented structure") {
    test::TestRng rng(29);
    FunctionalSpec spec = test::make_random_spec(rng, 5, ProblemKind::Phi, false, true);

    SUBCASE("zero field with zero data evaluates to zero") {
        FunctionalSpec zspec = zero_data_spec(spec.grid);
        FunctionalBreakdown b = evaluate(Field(zspec.grid), zspec);
        CHECK(b.residual == 0.0);
        CHECK(b.trace_misfit == 0.0);
        CHECK(b.flux_misfit == 0.0);
        CHECK(b.init_penalty == 0.0);
        CHECK(b.regularization == 0.0);
        CHECK(b.total == 0.0);
    }

    SUBCASE("total is quadratic along any ray") {
        Field u(spec.grid), d(spec.grid);
        rng.fill(u.values());
        rng.fill(d.values());
        auto j_at = [&](double alpha) {
            Field p = u;
            for (std::size_t i = 0; i < p.values().size(); ++i)
                p.values()[i] += alpha * d.values()[i];
            return evaluate(p, spec).total;
        };
        double j0 = j_at(0.0), j1 = j_at(1.0), j2 = j_at(2.0), j3 = j_at(3.0);
        double s1 = j0 - 2.0 * j1 + j2;
        double s2 = j1 - 2.0 * j2 + j3;
        CHECK(s1 == doctest::Approx(s2).epsilon(1e-10));
        CHECK(s1 >= 0.0); // convexity
    }

    SUBCASE("doubling the field with zero data quadruples the total") {
        FunctionalSpec zspec = spec;
        zspec.data = CauchyData(spec.grid);
        zspec.known_init = SpatialField(spec.grid);
        Field u(spec.grid);
        rng.fill(u.values());
        Field u2 = u;
        for (double& v : u2.values()) v *= 2.0;
        CHECK(evaluate(u2, zspec).total == doctest::Approx(4.0 * evaluate(u, zspec).total)
                                                .epsilon(1e-12));
    }

    SUBCASE("breakdown parts are nonnegative and sum to the total") {
        Field u(spec.grid);
        rng.fill(u.values());
        FunctionalBreakdown b = evaluate(u, spec);
        CHECK(b.residual >= 0.0);
        CHECK(b.trace_misfit >= 0.0);
        CHECK(b.flux_misfit >= 0.0);
        CHECK(b.init_penalty >= 0.0);
        CHECK(b.regularization >= 0.0);
        double total = b.residual + spec.weights.w_trace * b.trace_misfit +
                       spec.weights.w_flux * b.flux_misfit +
                       spec.weights.w_init * b.init_penalty +
                       spec.weights.epsilon * b.regularization;
        CHECK(b.total == doctest::Approx(total).epsilon(1e-14));
    }
}

TEST_CASE("gradient matches central finite differences") {
    // Central differences are exact for quadratics, so the only error is
    // roundoff; 1e-6 relative is far above it.
    test::TestRng rng(31);
    for (ProblemKind kind : {ProblemKind::Phi, ProblemKind::Psi}) {
        for (bool ablated : {false, true}) {
            FunctionalSpec spec = test::make_random_spec(rng, 5, kind, ablated, true);
            for (int trial = 0; trial < 5; ++trial) {
                Field u(spec.grid), d(spec.grid);
                rng.fill(u.values());
                rng.fill(d.values());
                Field g = gradient(u, spec);
                double gd = 0.0;
                for (std::size_t i = 0; i < g.values().size(); ++i)
                    gd += g.values()[i] * d.values()[i];

                const double delta = 1e-6;
                Field up = u, um = u;
                for (std::size_t i = 0; i < u.values().size(); ++i) {
                    up.values()[i] += delta * d.values()[i];
                    um.values()[i] -= delta * d.values()[i];
                }
                double fd = (evaluate(up, spec).total - evaluate(um, spec).total) / (2.0 * delta);
                CHECK(gd == doctest::Approx(fd).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("gradient of the zero field with zero data is zero") {
    SpaceTimeGrid g = make_grid(Extent{0.0, 0.4, 0.0, 0.4, 0.2}, Steps{0.1, 0.1, 1.0 / 15.0});
    FunctionalSpec spec = zero_data_spec(g);
    Field grad = gradient(Field(g), spec);
    for (double v : grad.values()) CHECK(v == 0.0);
}

TEST_CASE("gradient is affine: differences are data-independent and linear") {
    test::TestRng rng(37);
    FunctionalSpec spec1 = test::make_random_spec(rng, 4, ProblemKind::Phi, false, false);
    FunctionalSpec spec2 = spec1;
    for (Segment s : kSegments) {
        rng.fill(spec2.data.seg(s).f);
        rng.fill(spec2.data.seg(s).g);
    }
    rng.fill(spec2.known_init.values());

    Field u(spec1.grid), v(spec1.grid);
    rng.fill(u.values());
    rng.fill(v.values());
    Field uv = u;
    for (std::size_t i = 0; i < uv.values().size(); ++i) uv.values()[i] += v.values()[i];

    Field g1u = gradient(u, spec1), g1uv = gradient(uv, spec1);
    Field g2u = gradient(u, spec2), g2uv = gradient(uv, spec2);
    for (std::size_t i = 0; i < u.values().size(); ++i) {
        double d1 = g1uv.values()[i] - g1u.values()[i];
        double d2 = g2uv.values()[i] - g2u.values()[i];
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-9));
    }

    // linearity in v: H(2v) = 2 Hv
    Field u2v = u;
    for (std::size_t i = 0; i < u2v.values().size(); ++i) u2v.values()[i] += 2.0 * v.values()[i];
    Field g1u2v = gradient(u2v, spec1);
    for (std::size_t i = 0; i < u.values().size(); ++i) {
        double hv = g1uv.values()[i] - g1u.values()[i];
        double h2v = g1u2v.values()[i] - g1u.values()[i];
        CHECK(h2v == doctest::Approx(2.0 * hv).epsilon(1e-9));
    }
}

TEST_CASE("the quadratic form is strictly positive definite") {
    test::TestRng rng(41);
    FunctionalSpec spec = test::make_random_spec(rng, 4, ProblemKind::Phi, true, false);
    Field zero(spec.grid);
    Field b = gradient(zero, spec);
    for (int trial = 0; trial < 20; ++trial) {
        Field d(spec.grid);
        rng.fill(d.values());
        Field gd = gradient(d, spec);
        double curvature = 0.0;
        for (std::size_t i = 0; i < d.values().size(); ++i)
            curvature += d.values()[i] * (gd.values()[i] - b.values()[i]);
        CHECK(curvature > 0.0);
    }
}

TEST_CASE("gradient vanishes at the direct-solve minimizer") {
    test::TestRng rng(43);
    FunctionalSpec spec = test::make_random_spec(rng, 4, ProblemKind::Phi, false, true);
    Field star = test::direct_minimizer(spec);

    Field g = gradient(star, spec);
    double gnorm = 0.0;
    for (double v : g.values()) gnorm += v * v;
    gnorm = std::sqrt(gnorm);

    double data_norm = std::sqrt(spec.data.energy());
    CHECK(gnorm <= 1e-9 * (1.0 + data_norm));
}

TEST_CASE("shape mismatches are rejected") {
    SpaceTimeGrid g = make_grid(Extent{0.0, 0.4, 0.0, 0.4, 0.2}, Steps{0.1, 0.1, 1.0 / 15.0});
    SpaceTimeGrid g2 = make_grid(Extent{0.0, 0.5, 0.0, 0.4, 0.2}, Steps{0.1, 0.1, 1.0 / 15.0});
    FunctionalSpec spec = zero_data_spec(g);
    CHECK_THROWS_AS(evaluate(Field(g2), spec), GridMismatchError);
    FunctionalSpec bad = spec;
    bad.data = CauchyData(g2);
    CHECK_THROWS_AS(evaluate(Field(g), bad), GridMismatchError);
}
