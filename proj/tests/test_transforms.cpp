#include <doctest.h>

#include "dynrmat/builder.hpp"
#include "dynrmat/transforms.hpp"
#include "dynrmat/verifier.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dynrmat;

namespace {
bool near(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

double max_diff(const DynamicalRMatrix& A, const DynamicalRMatrix& B, const std::vector<CVec>& pts) {
    double m = 0.0;
    for (const CVec& l : pts) {
        const Coefficients a = A.coefficients(l), b = B.coefficients(l);
        m = std::max({m, (a.delta - b.delta).cwiseAbs().maxCoeff(), (a.d - b.d).cwiseAbs().maxCoeff()});
    }
    return m;
}

CVec plus(const CVec& a, const CVec& b) {
    CVec out = a;
    for (size_t k = 0; k < a.size(); ++k) out[k] += b[k];
    return out;
}
}  // namespace

TEST_CASE("constant twist leaves R unchanged") {
    const DynamicalRMatrix R = build(testing::example4_params());
    std::vector<LambdaFn> beta(4, [](const CVec&) { return cplx(2.0, -1.0); });
    CHECK(max_diff(apply_twist(R, beta), R, draw_samples(R, 3, 1)) < 1e-14);
}

TEST_CASE("linear exponential twist multiplies d by a constant") {
    const DynamicalRMatrix R = build(testing::example4_params());
    const double alpha[4][4] = {{0, 0.3, -0.2, 0.1}, {0.5, 0, 0.25, -0.4}, {0.1, 0.2, 0, 0.3}, {-0.1, 0.6, 0.2, 0}};
    std::vector<LambdaFn> beta;
    for (int i = 0; i < 4; ++i)
        beta.emplace_back([&alpha, i](const CVec& l) {
            cplx e = 0.0;
            for (int k = 0; k < 4; ++k) e += alpha[i][k] * l[k];
            return std::exp(e);
        });
    const DynamicalRMatrix T = apply_twist(R, beta);
    for (const CVec& l : draw_samples(R, 3, 2)) {
        const Coefficients a = T.coefficients(l), b = R.coefficients(l);
        CHECK((a.delta - b.delta).cwiseAbs().maxCoeff() == 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j && b.d(i, j) != cplx(0.0))
                    CHECK(near(a.d(i, j) / b.d(i, j), std::exp(cplx(alpha[i][j] - alpha[j][i]))));
    }
}

TEST_CASE("twists of random builds still solve the DQYBE") {
    testing::Generator gen(31);
    for (int t = 0; t < 10; ++t) {
        const ClassificationParams c = gen.datum({});
        const int n = c.partition.n;
        std::vector<LambdaFn> beta;
        for (int i = 0; i < n; ++i) {
            ExpPoly e{gen.polar(0.5, 2.0), {}, {}};
            for (int k = 0; k < n; ++k) e.lin.push_back(0.3 * gen.box(1.0));
            beta.emplace_back(e);
        }
        const DynamicalRMatrix T = apply_twist(build(c), beta);
        for (const CVec& l : draw_samples(T, 2, t)) CHECK(dqybe_residual(T, l) < 1e-9);
    }
}

TEST_CASE("2-forms") {
    const DynamicalRMatrix R = build(testing::example4_params());
    const auto s = draw_samples(R, 3, 3);
    CHECK(max_diff(apply_2form(R, TwoFormSpec::trivial(), testing::example4_partition(), s), R, s) == 0.0);

    // n = 2: no triplet constraint.
    const DynamicalRMatrix P = build(testing::trig_free(2, 1.0, 2.0));
    const TwoFormSpec any = TwoFormSpec::table_of([](int, int, const CVec& l) { return std::exp(l[0] * l[1]); });
    const DynamicalRMatrix G = apply_2form(P, any, testing::trig_free(2, 1.0, 2.0).partition, s);
    for (const CVec& l : draw_samples(G, 3, 4)) CHECK(dqybe_defect(G, l).relative() < 1e-9);

    const TwoFormSpec minus = TwoFormSpec::table_of([](int, int, const CVec&) { return cplx(-1.0); });
    const DynamicalRMatrix M = apply_2form(R, minus, testing::example4_partition(), s);
    for (const CVec& l : s) CHECK(dqybe_defect(M, l).relative() < 1e-9);
}

TEST_CASE("closedness") {
    const IndexPartition p{3, {{{{1, 2, 3}, {}}}}};
    const CVec l0{0.2, 0.1, -0.3};
    ExpPoly e{1.0, {0.2, 0.1, 0.0}, {}};
    CHECK(check_closed(TwoFormSpec::exact(std::vector<ExpPoly>{e, e, e}), p, {l0}).ok);
    CHECK(check_closed(TwoFormSpec::table_of([](int, int, const CVec&) { return cplx(3.0); }), p, {l0}).ok);
    const TwoFormSpec bad = TwoFormSpec::table_of([](int i, int j, const CVec& l) {
        return i == 1 && j == 2 ? std::exp(l[2]) : cplx(1.0);
    });
    const ValidationResult v = check_closed(bad, p, {l0});
    CHECK_FALSE(v.ok);
    CHECK(v.indices == std::vector<int>{1, 2, 3});
    const DynamicalRMatrix R = build(testing::trig_free(3, 1.0, 2.0));
    CHECK_THROWS_AS(apply_2form(R, bad, p, {l0}), Error);
}

TEST_CASE("contraction") {
    const DynamicalRMatrix R = build(testing::example4_params());
    const DynamicalRMatrix C = contract(R, {1, 2});
    CHECK(C.n() == 2);
    const CVec mu{cplx(0.7, 0.2), -0.4};
    CHECK(near(C.delta(1, 2, mu), 1.0 / (mu[0] - mu[1])));
    CHECK(near(C.d(1, 2, mu), 1.0 - 1.0 / (mu[0] - mu[1])));
    CHECK(max_diff(contract(R, {1, 2, 3, 4}), R, draw_samples(R, 2, 5)) == 0.0);
    const DynamicalRMatrix one = contract(R, {3});
    CHECK(near(one.delta(1, 1, CVec{0.3}), -1.0));
    CHECK_THROWS_AS(contract(R, {2, 1}), Error);

    // Union of whole D-classes in one block agrees with the restricted build.
    ClassificationParams sub;
    sub.partition = {3, {{{{1}, {{2, 3}}}}}};
    sub.per_block = {{0.0, 1.0}};
    sub.signs = {{"2,3", -1}};
    const DynamicalRMatrix Cs = contract(R, {1, 3, 4});
    for (const CVec& l : {CVec{0.3, 0.8, 0.0}, CVec{cplx(0.1, 0.5), 0.4, 0.0}}) {
        const Coefficients a = Cs.coefficients(l), b = build(sub).coefficients(l);
        CHECK((a.delta - b.delta).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((a.d - b.d).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("decoupled composition") {
    auto scalar = [](cplx c) {
        return DynamicalRMatrix(1, [c](const CVec&) { return Coefficients{CMatrix::Constant(1, 1, c), CMatrix::Zero(1, 1)}; });
    };
    const DynamicalRMatrix D = decouple_compose(scalar(2.0), scalar(-3.0), 1.0, 1.0);
    const CVec l{0.3, 0.1};
    CHECK(near(D.delta(1, 1, l), 2.0));
    CHECK(near(D.delta(2, 2, l), -3.0));
    CHECK(near(D.d(1, 2, l) * D.d(2, 1, l) - D.delta(1, 2, l) * D.delta(2, 1, l), 1.0));
    CHECK(dqybe_defect(D, l).relative() < 1e-12);

    const DynamicalRMatrix R = build(testing::example4_params());
    const cplx rs = std::sqrt(cplx(2.0, 1.0));
    const DynamicalRMatrix F = decouple_compose(R, scalar(1.5), rs, rs);
    const auto s = draw_samples(F, 3, 6);
    CHECK(verify(F, s).pass);
    CHECK(max_diff(contract(F, {1, 2, 3, 4}), R, draw_samples(R, 2, 7)) < 1e-15);
}

TEST_CASE("f-scaling converges linearly") {
    ClassificationParams c;
    c.partition = {3, {{{{1}, {}}, {{2, 3}, {}}}}};
    c.per_block = {{cplx(1.2, 0.3), cplx(0.8, -0.2)}};
    c.f = {{"3", cplx(1.3, 0.2)}};
    c.signs = {{"2", -1}};
    const DynamicalRMatrix R = build(c);
    std::vector<double> dist;
    for (double eta : {1e-1, 1e-2, 1e-3}) {
        const ScaledDatum sd = scale_f(c, eta);
        const DynamicalRMatrix target = permute_indices(R, sd.perm);
        const DynamicalRMatrix scaled = build(sd.params);
        dist.push_back(max_diff(scaled, target, draw_samples(target, 4, 8)));
    }
    CHECK(dist[1] < dist[0]);
    CHECK(dist[2] < dist[1]);
    const double slope = std::log(dist[0] / dist[2]) / std::log(100.0);
    CHECK(slope > 0.9);
    CHECK(slope < 1.1);

    const ClassificationParams one = testing::trig_free(3, 1.0, 2.0);
    CHECK_THROWS_AS(scale_f(one, 1.0), Error);
}

TEST_CASE("reparametrization absorbs f") {
    const CVec zero = reparametrize(testing::example4_params());
    for (cplx z : zero) CHECK(z == cplx(0.0));

    ClassificationParams c = testing::example4_params();
    c.f["3,4"] = 2.0;
    const CVec off = reparametrize(c);
    CHECK(near(off[2], -1.0));
    CHECK(near(off[3], -1.0));
    const DynamicalRMatrix R = build(c), N = build(neutral_f(c));
    for (const CVec& l : draw_samples(R, 10, 9)) {
        const Coefficients a = R.coefficients(l), b = N.coefficients(plus(l, off));
        CHECK((a.delta - b.delta).cwiseAbs().maxCoeff() < 1e-10);
    }

    ClassificationParams t = testing::trig_free(2, 1.0, 2.0);
    t.f["2"] = 4.0;
    const CVec ot = reparametrize(t);
    CHECK(near(ot[1], -2.0));
    const CVec l{0.3, cplx(0.1, 0.2)};
    CHECK(near(build(t).delta(1, 2, l), build(neutral_f(t)).delta(1, 2, plus(l, ot)), 1e-10));
}

TEST_CASE("trigonometric to rational limit") {
    const ClassificationParams c = testing::example4_params();
    const DynamicalRMatrix R = build(c);
    const auto pts = draw_samples(R, 4, 10);
    CHECK(trig_to_rational_limit(c, {1e-6}, pts).distance[0] < 1e-4);
    const LimitReport rep = trig_to_rational_limit(c, {1e-1, 1e-2, 1e-3}, pts);
    CHECK(rep.distance[1] < rep.distance[0]);
    CHECK(rep.distance[2] < rep.distance[1]);
    CHECK(rep.order > 0.9);
    CHECK(rep.order < 1.1);
    for (double d : rep.dqybe) CHECK(d < 1e-9);
}

TEST_CASE("scalar multiples stay solutions") {
    const DynamicalRMatrix R = scale_matrix(build(testing::example4_params()), cplx(0.3, 2.0));
    for (const CVec& l : draw_samples(R, 2, 11)) CHECK(dqybe_defect(R, l).relative() < 1e-12);
}

TEST_CASE("relabelling") {
    const DynamicalRMatrix R = build(testing::example4_params());
    const std::vector<int> perm{3, 1, 4, 2};
    const DynamicalRMatrix P = permute_indices(R, perm);
    const CVec l{0.3, cplx(0.1, 0.2), -0.5, 0.9};
    const CVec mu = permute_lambda(l, perm);
    for (int a = 1; a <= 4; ++a)
        for (int b = 1; b <= 4; ++b) CHECK(near(P.delta(a, b, mu), R.delta(perm[a - 1], perm[b - 1], l)));
    CHECK_THROWS_AS(permute_indices(R, {1, 1, 2, 3}), Error);
}
