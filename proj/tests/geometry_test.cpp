#include <doctest.h>

#include <cmath>
#include <future>

#include "immcheck/catalog.hpp"
#include "immcheck/geometry.hpp"
#include "test_support.hpp"

using namespace immcheck;

TEST_SUITE("geometry") {

TEST_CASE("plane chart is totally geodesic") {
    const CatalogInstance plane = instantiate("plane");
    const GeometryAtPoint geo = geometry_at(plane.spec, Eigen::Vector2d(0.3, 0.8));

    CHECK((geo.g - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    for (const auto& g : geo.gamma) CHECK(g.isZero(0.0));
    CHECK(geo.laplace_F.isZero(0.0));
    CHECK(geo.mean_curvature.isZero(0.0));
    for (const auto& a : second_fundamental_form(geo)) CHECK(a.isZero(0.0));
}

TEST_CASE("unit sphere chart reproduces the round metric and laplacian") {
    const CatalogInstance sphere = instantiate("round_sphere");
    const Eigen::Vector2d p(M_PI / 3.0, 0.0);
    const GeometryAtPoint geo = geometry_at(sphere.spec, p);

    CHECK(geo.g(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(geo.g(1, 1) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(std::abs(geo.g(0, 1)) < 1e-15);

    // ΔF = -mF with m = 2 on the unit sphere.
    CHECK((geo.laplace_F + 2.0 * geo.F).norm() < 1e-13);
    CHECK((geo.mean_curvature + geo.F).norm() < 1e-13);
}

TEST_CASE("circle at arc length") {
    const CatalogInstance circle = instantiate("circle");
    const auto points = testing::random_points(circle.spec.domain_box, 10, 3);
    for (const auto& p : points) {
        const GeometryAtPoint geo = geometry_at(circle.spec, p);
        CHECK((geo.laplace_F + geo.F).norm() < 1e-14);
        CHECK((geo.mean_curvature + geo.F).norm() < 1e-14);
        const auto alpha = second_fundamental_form(geo);
        CHECK(alpha[0](0, 0) == doctest::Approx(-geo.F(0)).epsilon(1e-14));
        CHECK(alpha[1](0, 0) == doctest::Approx(-geo.F(1)).epsilon(1e-14));
    }
}

TEST_CASE("laplacian of height functions and |F|^2") {
    const CatalogInstance plane = instantiate("plane");
    const CatalogInstance sphere = instantiate("round_sphere");

    for (std::uint64_t s = 0; s < 5; ++s) {
        Eigen::VectorXd v(3);
        for (int i = 0; i < 3; ++i)
            v(i) = 2.0 * testing::unit_double(testing::mix64(s, i)) - 1.0;

        const GeometryAtPoint pg = geometry_at(plane.spec, Eigen::Vector2d(0.4, 0.6));
        CHECK(std::abs(laplace_beltrami_scalar(pg, height_jet(pg, v))) < 1e-14);

        const GeometryAtPoint sg = geometry_at(sphere.spec, Eigen::Vector2d(1.0, 2.0));
        CHECK(std::abs(laplace_beltrami_scalar(sg, norm_squared_jet(sg))) < 1e-12);
    }

    // On the flat family with a^2 = 1.5, n = 2: Δ|F|^2 = 2 |T|^2 = 2(n - a^2) = 1.
    const CatalogInstance ex = instantiate("example34", {{"n", 2.0}, {"a", std::sqrt(1.5)}});
    const auto pts = testing::random_points(ex.spec.domain_box, 20, 4);
    for (const auto& p : pts) {
        const GeometryAtPoint geo = geometry_at(ex.spec, p);
        CHECK(laplace_beltrami_scalar(geo, norm_squared_jet(geo)) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("laplacian of an expression scalar") {
    const CatalogInstance circle = instantiate("circle");
    // h = x1 has Δh = g^11 h'' - Γ h' = 0 at arc length.
    const ExprAst h = ExprAst::make_variable(0);
    CHECK(std::abs(laplace_beltrami_scalar(circle.spec, h, Eigen::VectorXd::Constant(1, 1.0))) <
          1e-14);
}

TEST_CASE("height-function hessian matches the second fundamental form") {
    const CatalogInstance ex = instantiate("example34");
    const auto points = testing::random_points(ex.spec.domain_box, 20, 7);
    for (const auto& p : points) {
        const GeometryAtPoint geo = geometry_at(ex.spec, p);
        const auto alpha = second_fundamental_form(geo);

        Eigen::VectorXd v(geo.N);
        for (int i = 0; i < geo.N; ++i)
            v(i) = 2.0 * testing::unit_double(testing::mix64(17, i)) - 1.0;

        const Jet2 h = height_jet(geo, v);
        for (int i = 0; i < geo.m; ++i) {
            for (int j = 0; j < geo.m; ++j) {
                double alpha_dot_v = 0.0;
                for (int a = 0; a < geo.N; ++a) alpha_dot_v += alpha[a](i, j) * v(a);
                double hess_h = h.hess()(i, j);
                for (int kk = 0; kk < geo.m; ++kk)
                    hess_h -= geo.gamma[kk](i, j) * h.grad()(kk);
                CHECK(std::abs(alpha_dot_v - hess_h) <= 1e-10);
            }
        }
    }
}

TEST_CASE("second fundamental form is normal to the tangent space") {
    for (const char* id : {"round_sphere", "example34", "circle_x_sphere"}) {
        const CatalogInstance inst = instantiate(id);
        const auto points = testing::random_points(inst.spec.domain_box, 10, 23);
        for (const auto& p : points) {
            const GeometryAtPoint geo = geometry_at(inst.spec, p);
            const auto alpha = second_fundamental_form(geo);
            for (int i = 0; i < geo.m; ++i) {
                for (int j = 0; j < geo.m; ++j) {
                    Eigen::VectorXd aij(geo.N);
                    for (int a = 0; a < geo.N; ++a) aij(a) = alpha[a](i, j);
                    const double scale = std::max(1.0, aij.norm());
                    for (int l = 0; l < geo.m; ++l)
                        CHECK(std::abs(aij.dot(geo.dF.col(l))) <=
                              kTolOrth * scale * geo.dF.col(l).norm());
                }
            }
        }
    }
}

TEST_CASE("tangent projections of the product of circles") {
    const CatalogInstance pc = instantiate("product_circles");
    REQUIRE(pc.frame.has_value());
    const auto points = testing::random_points(pc.spec.domain_box, 20, 31);
    for (const auto& p : points) {
        const GeometryAtPoint geo = geometry_at(pc.spec, p);
        const Eigen::VectorXd t2 = tangent_projection_norms(geo, *pc.frame);
        const double u = p(0), v = p(1);
        CHECK(t2(0) == doctest::Approx(std::sin(u) * std::sin(u)).epsilon(1e-12));
        CHECK(t2(1) == doctest::Approx(std::cos(u) * std::cos(u)).epsilon(1e-12));
        CHECK(t2(2) == doctest::Approx(std::sin(v) * std::sin(v)).epsilon(1e-12));
        CHECK(t2(3) == doctest::Approx(std::cos(v) * std::cos(v)).epsilon(1e-12));
        for (int i = 0; i < 4; ++i) {
            CHECK(t2(i) >= 0.0);
            CHECK(t2(i) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("pointwise identities hold on every catalog entry") {
    for (const auto& info : catalog_entries()) {
        CAPTURE(info.id);
        const CatalogInstance inst = instantiate(info.id);
        const auto points = testing::random_points(inst.spec.domain_box, 25, 13);
        for (const auto& p : points) {
            const GeometryAtPoint geo = geometry_at(inst.spec, p);

            // frame completeness over the standard basis
            const Eigen::VectorXd t2 = tangent_projection_norms(
                geo, Eigen::MatrixXd::Identity(geo.N, geo.N));
            CHECK(std::abs(t2.sum() - geo.m) <= 1e-10);

            // trace identity, bit-exact by construction
            CHECK((geo.laplace_F - static_cast<double>(geo.m) * geo.mean_curvature)
                      .norm() == 0.0);

            // Christoffel symmetry, bit-exact by construction
            for (int kk = 0; kk < geo.m; ++kk)
                for (int i = 0; i < geo.m; ++i)
                    for (int j = i + 1; j < geo.m; ++j)
                        CHECK(geo.gamma[kk](i, j) == geo.gamma[kk](j, i));

            // mean curvature is normal to the tangent space
            const double h_norm = geo.mean_curvature.norm();
            for (int j = 0; j < geo.m; ++j)
                CHECK(std::abs(geo.mean_curvature.dot(geo.dF.col(j))) <=
                      kTolOrth * h_norm * geo.dF.col(j).norm());
        }
    }
}

TEST_CASE("trace identity and normality of the mean curvature") {
    for (const char* id : {"round_sphere", "example34", "helix_graph"}) {
        const CatalogInstance inst = instantiate(id);
        const auto points = testing::random_points(inst.spec.domain_box, 15, 41);
        for (const auto& p : points) {
            const GeometryAtPoint geo = geometry_at(inst.spec, p);
            CHECK((geo.laplace_F - static_cast<double>(geo.m) * geo.mean_curvature)
                      .norm() == 0.0);
            const double h_norm = geo.mean_curvature.norm();
            for (int j = 0; j < geo.m; ++j) {
                CHECK(std::abs(geo.mean_curvature.dot(geo.dF.col(j))) <=
                      kTolOrth * h_norm * geo.dF.col(j).norm());
            }
        }
    }
}

TEST_CASE("geometry is invariant under ambient rotations") {
    const CatalogInstance ex = instantiate("example34");
    const Eigen::MatrixXd Q = testing::random_orthogonal(ex.spec.N, 2024);
    const ImmersionSpec rotated = apply_linear_map(ex.spec, Q);

    const auto points = testing::random_points(ex.spec.domain_box, 10, 57);
    for (const auto& p : points) {
        const GeometryAtPoint a = geometry_at(ex.spec, p);
        const GeometryAtPoint b = geometry_at(rotated, p);
        CHECK((a.g - b.g).cwiseAbs().maxCoeff() <= 1e-10);
        for (int kk = 0; kk < a.m; ++kk)
            CHECK((a.gamma[kk] - b.gamma[kk]).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(std::abs(a.laplace_F.norm() - b.laplace_F.norm()) <= 1e-10);
        CHECK(std::abs(a.mean_curvature.norm() - b.mean_curvature.norm()) <= 1e-10);
        CHECK((b.laplace_F - Q * a.laplace_F).norm() <= 1e-10);
    }
}

TEST_CASE("degenerate charts are rejected") {
    // rank-1 differential everywhere
    const ImmersionSpec collapsed =
        parse("dim 2 -> 3; F = (x1+x2, x1+x2, 0); box x1 in [0,1], x2 in [0,1];");
    CHECK_THROWS_AS(geometry_at(collapsed, Eigen::Vector2d(0.5, 0.5)), NotAnImmersion);

    // sphere chart at the pole
    const ImmersionSpec polar = parse(
        "dim 2 -> 3; F = (sin(x1)*cos(x2), sin(x1)*sin(x2), cos(x1)); "
        "box x1 in [-0.1,3], x2 in [0,6.3];");
    CHECK_THROWS_AS(geometry_at(polar, Eigen::Vector2d(0.0, 1.0)), NotAnImmersion);

    try {
        geometry_at(collapsed, Eigen::Vector2d(0.25, 0.5));
        FAIL("expected NotAnImmersion");
    } catch (const NotAnImmersion& e) {
        CHECK(e.point.size() == 2);
        CHECK(e.point[0] == 0.25);
        CHECK(e.det_g <= kEpsImmersion);
    }
}

TEST_CASE("metric inverse is accurate") {
    const CatalogInstance ex = instantiate("example34", {{"n", 3.0}, {"a", std::sqrt(2.5)}});
    const GeometryAtPoint geo =
        geometry_at(ex.spec, Eigen::Vector3d(1.0, 2.0, 3.0));
    const Eigen::MatrixXd eye = geo.g * geo.g_inv;
    CHECK((eye - Eigen::MatrixXd::Identity(geo.m, geo.m)).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(geo.sqrt_det_g == std::sqrt(geo.det_g));
}

TEST_CASE("a shared spec evaluates safely from multiple threads") {
    const CatalogInstance ex = instantiate("example34");
    const auto points = testing::random_points(ex.spec.domain_box, 40, 71);

    std::vector<Eigen::VectorXd> sequential;
    for (const auto& p : points) sequential.push_back(geometry_at(ex.spec, p).laplace_F);

    std::vector<std::future<std::vector<Eigen::VectorXd>>> futures;
    for (int t = 0; t < 4; ++t) {
        futures.push_back(std::async(std::launch::async, [&] {
            std::vector<Eigen::VectorXd> out;
            for (const auto& p : points) out.push_back(geometry_at(ex.spec, p).laplace_F);
            return out;
        }));
    }
    for (auto& f : futures) {
        const auto got = f.get();
        REQUIRE(got.size() == sequential.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == sequential[i]);
    }
}

TEST_CASE("frame split validation") {
    CHECK_THROWS_AS(FrameSplit::cylinder(0, 1), DimensionMismatch);
    CHECK_THROWS_AS(FrameSplit::torus(1, 0), DimensionMismatch);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
    bad(0, 0) = 2.0;
    CHECK_THROWS_AS(FrameSplit::cylinder(1, 1, bad), Error);
    CHECK_THROWS_AS(FrameSplit::cylinder(2, 1, Eigen::MatrixXd::Identity(3, 3)),
                    DimensionMismatch);

    const FrameSplit f = FrameSplit::torus(1, 2);
    CHECK(f.ambient_dim() == 5);
    CHECK(f.second_block_begin() == 2);
}

} // TEST_SUITE
