#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "uqfi/datagen.hpp"
#include "uqfi/errors.hpp"
#include "uqfi/fitters.hpp"
#include "uqfi/rng.hpp"

using namespace uqfi;

namespace {

// dense Gauss-Jordan solve, test-local oracle for the normal equations
std::vector<double> solve_normal_equations(const Dataset& data) {
    const std::size_t n = data.n(), p = data.p(), d = p + 1;
    std::vector<std::vector<double>> a(d, std::vector<double>(d + 1, 0.0));
    auto design = [&](std::size_t i, std::size_t j) -> double {
        return j == 0 ? 1.0 : data.x(i, j - 1);
    };
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c)
            for (std::size_t i = 0; i < n; ++i) a[r][c] += design(i, r) * design(i, c);
        for (std::size_t i = 0; i < n; ++i) a[r][d] += design(i, r) * data.y[i];
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= d; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> beta(d);
    for (std::size_t r = 0; r < d; ++r) beta[r] = a[r][d] / a[r][r];
    return beta;
}

std::vector<double> fd_gradient(const Predictor& predictor, std::vector<double> row) {
    std::vector<double> g(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        double h = 1e-5 * std::max(1.0, std::fabs(row[j]));
        double orig = row[j];
        row[j] = orig + h;
        double up = predictor.predict(row);
        row[j] = orig - h;
        double down = predictor.predict(row);
        row[j] = orig;
        g[j] = (up - down) / (2.0 * h);
    }
    return g;
}

Dataset linear_benchmark(std::size_t n, std::uint64_t error_seed = 1) {
    return generate_linear_benchmark(FeatureSpec{}, ErrorLaw{}, n, error_seed);
}

double r_squared(const Dataset& data, const Predictor& predictor) {
    double mean = 0.0;
    for (double v : data.y) mean += v;
    mean /= static_cast<double>(data.n());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        double e = data.y[i] - predictor.predict(data.x.row(i));
        ss_res += e * e;
        double d = data.y[i] - mean;
        ss_tot += d * d;
    }
    return 1.0 - ss_res / ss_tot;
}

} // namespace

TEST_CASE("ols matches the normal equations and the truth") {
    Dataset data = linear_benchmark(1000);
    PredictorPtr fit = fit_ols(data);

    std::vector<double> zero(data.p(), 0.0);
    double intercept = fit->predict(zero);
    auto grad = fit->gradient(zero);

    auto oracle = solve_normal_equations(data);
    CHECK(intercept == doctest::Approx(oracle[0]).epsilon(1e-8));
    for (std::size_t j = 0; j < data.p(); ++j)
        CHECK(grad[j] == doctest::Approx(oracle[j + 1]).epsilon(1e-8));

    CHECK(intercept == approx_margin(1.0, 0.1));
    CHECK(grad[0] == approx_margin(-2.0, 0.1));
    CHECK(grad[1] == approx_margin(5.0, 0.1));
    CHECK(grad[2] == approx_margin(0.0, 0.1));
    CHECK(grad[3] == approx_margin(0.0, 0.1));
    CHECK(fit->descriptor() == "ols");
    CHECK(fit->supports_counterfactual_rows());
}

TEST_CASE("ols on a constant outcome is the constant") {
    Dataset data = linear_benchmark(200);
    for (auto& v : data.y) v = 7.0;
    PredictorPtr fit = fit_ols(data);
    std::vector<double> zero(data.p(), 0.0);
    CHECK(fit->predict(zero) == doctest::Approx(7.0).epsilon(1e-10));
    for (double g : fit->gradient(zero)) CHECK(std::fabs(g) < 1e-8);
}

TEST_CASE("ols rejects singular designs and tiny samples") {
    Dataset data = linear_benchmark(100);
    for (std::size_t i = 0; i < data.n(); ++i) data.x(i, 3) = data.x(i, 2); // duplicate column
    CHECK_THROWS_AS(fit_ols(data), NumericError);

    Dataset tiny = linear_benchmark(4);
    CHECK_THROWS_AS(fit_ols(tiny), ValidationError);
}

TEST_CASE("degree-1 polynomial fit coincides with ols") {
    Dataset data = linear_benchmark(500);
    BasisConfig basis;
    basis.degree = 1;
    PredictorPtr poly = fit_additive_poly(data, basis);
    PredictorPtr ols = fit_ols(data);
    for (std::size_t i = 0; i < 20; ++i) {
        auto row = data.x.row(i);
        CHECK(poly->predict(row) == doctest::Approx(ols->predict(row)).epsilon(1e-8));
        auto gp = poly->gradient(row);
        auto go = ols->gradient(row);
        for (std::size_t j = 0; j < data.p(); ++j)
            CHECK(gp[j] == doctest::Approx(go[j]).epsilon(1e-7));
    }
}

TEST_CASE("cubic basis captures the quadratic truth of model 1") {
    Dataset data = generate(ModelSpec{1}, FeatureSpec{}, ErrorLaw{}, 1000, 2);
    PredictorPtr fit = fit_additive_poly(data, {});
    // signal variance is 53 against unit noise, so even a perfect fit tops out
    // near R^2 = 53/54 ~ 0.981; 0.97 leaves room for sampling noise
    CHECK(r_squared(data, *fit) >= 0.97);
}

TEST_CASE("poly gradients agree with finite differences") {
    Dataset data = generate(ModelSpec{4}, FeatureSpec{}, ErrorLaw{}, 400, 3);
    BasisConfig basis;
    basis.interactions = {{0, 2}};
    PredictorPtr fit = fit_additive_poly(data, basis);
    for (std::size_t i = 0; i < 10; ++i) {
        std::vector<double> row(data.x.row(i).begin(), data.x.row(i).end());
        auto fd = fd_gradient(*fit, row);
        auto an = fit->gradient(row);
        for (std::size_t j = 0; j < row.size(); ++j) {
            double denom = std::max(1.0, std::fabs(fd[j]));
            CHECK(std::fabs(an[j] - fd[j]) / denom <= 1e-4);
        }
    }
}

TEST_CASE("rank-deficient polynomial basis points at the regularized fitter") {
    Dataset data = linear_benchmark(300);
    for (std::size_t i = 0; i < data.n(); ++i) data.x(i, 3) = 0.0; // constant column
    BasisConfig basis;
    basis.standardize = false; // keep the zero column degenerate
    try {
        fit_additive_poly(data, basis);
        FAIL("expected a rank-deficiency error");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("MCP") != std::string::npos);
    }
    CHECK_THROWS_AS(fit_additive_poly(linear_benchmark(5), {}), NumericError);
}

TEST_CASE("basis validates interaction pairs and degree") {
    Dataset data = linear_benchmark(100);
    BasisConfig bad;
    bad.interactions = {{0, 9}};
    CHECK_THROWS_AS(fit_additive_poly(data, bad), ValidationError);
    bad.interactions = {{1, 1}};
    CHECK_THROWS_AS(fit_additive_poly(data, bad), ValidationError);
    bad.interactions.clear();
    bad.degree = 0;
    CHECK_THROWS_AS(fit_additive_poly(data, bad), ValidationError);
}

TEST_CASE("mcp solution solves the scalar objective at the selected lambda") {
    // single feature: coordinate descent at the selected lambda must hit the
    // exact minimizer of (1/2n)||y - b z||^2 + mcp(b), z the standardized column
    Rng rng(5);
    const std::size_t n = 200;
    Dataset data;
    data.x = Matrix(n, 1);
    data.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        data.x(i, 0) = rng.next_normal();
        data.y[i] = 0.8 * data.x(i, 0) + 0.3 * rng.next_normal();
    }

    McpConfig config;
    config.basis.degree = 1;
    config.gamma = 3.0;
    config.n_lambda = 8;
    config.lambda_min_ratio = 0.5; // keep lambda large: the threshold branch
    McpDiagnostics diag;
    PredictorPtr fit = fit_mcp_additive(data, config, &diag);
    const double lambda = diag.lambda_path[diag.selected_index];

    // standardized column and centered outcome, as the solver sees them
    double xm = 0.0, ym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xm += data.x(i, 0);
        ym += data.y[i];
    }
    xm /= n;
    ym /= n;
    // the raw feature passes through basis standardization and then column
    // standardization; combined, the column is (x - xm)/sd_pop
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (data.x(i, 0) - xm) * (data.x(i, 0) - xm);
    double sd_pop = std::sqrt(ss / n);

    auto objective = [&](double b) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = (data.x(i, 0) - xm) / sd_pop;
            double e = (data.y[i] - ym) - b * z;
            rss += e * e;
        }
        double pen = std::fabs(b) <= config.gamma * lambda
                         ? lambda * std::fabs(b) - b * b / (2.0 * config.gamma)
                         : 0.5 * config.gamma * lambda * lambda;
        return rss / (2.0 * n) + pen;
    };
    double best_b = 0.0, best = objective(0.0);
    for (double b = -2.0; b <= 2.0; b += 1e-4) {
        double v = objective(b);
        if (v < best) {
            best = v;
            best_b = b;
        }
    }

    // the fitted raw slope times the population sd is the standardized coefficient
    std::vector<double> row{xm};
    double fitted_std = fit->gradient(row)[0] * sd_pop;
    CHECK(fitted_std == approx_margin(best_b, 2e-4));

    // closed-form rule in the |z| <= gamma lambda branch
    double z_stat = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        z_stat += (data.x(i, 0) - xm) / sd_pop * (data.y[i] - ym);
    z_stat /= n;
    if (std::fabs(z_stat) <= config.gamma * lambda) {
        double soft = std::fabs(z_stat) > lambda
                          ? (z_stat > 0 ? z_stat - lambda : z_stat + lambda)
                          : 0.0;
        CHECK(fitted_std == doctest::Approx(soft / (1.0 - 1.0 / config.gamma)).epsilon(1e-6));
    }
}

TEST_CASE("mcp path starts empty at lambda_max and its objective never rises") {
    Dataset data = linear_benchmark(300);
    McpConfig config;
    config.basis.degree = 2;
    McpDiagnostics diag;
    PredictorPtr fit = fit_mcp_additive(data, config, &diag);

    REQUIRE(!diag.lambda_path.empty());
    CHECK(diag.nonzero_path.front() == 0); // lambda_max keeps everything at zero
    CHECK(diag.lambda_path.size() == 100);
    REQUIRE(!diag.objective_trace.empty()); // trace enables the monotonicity guard
    for (double v : diag.objective_trace) CHECK(std::isfinite(v));

    // small lambdas reach the unpenalized fit: slopes near the truth
    std::vector<double> zero(data.p(), 0.0);
    auto grad = fit->gradient(zero);
    CHECK(grad[0] == approx_margin(-2.0, 0.2));
    CHECK(grad[1] == approx_margin(5.0, 0.2));
}

TEST_CASE("mcp recovers sparse support on a wider feature block") {
    const std::size_t n = 300, p = 30;
    FeatureSpec spec;
    spec.p = p;
    Dataset data;
    data.x = sample_features(spec, n);
    data.y.resize(n);
    Rng rng(9);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = data.x.row(i);
        data.y[i] = model_outcome(ModelSpec{2}, row, rng.next_normal());
    }

    McpConfig config;
    config.basis.degree = 3;
    PredictorPtr fit = fit_mcp_additive(data, config);

    std::vector<double> probe(p, 0.1);
    std::size_t active_raw = 0;
    bool has_x1 = false, has_x2 = false;
    for (std::size_t j = 0; j < p; ++j) {
        // a feature is active when its gradient is nonzero somewhere
        bool active = false;
        for (double shift : {-0.7, 0.0, 0.9}) {
            probe[j] += shift;
            if (std::fabs(fit->gradient(probe)[j]) > 1e-12) active = true;
            probe[j] -= shift;
        }
        if (active) {
            ++active_raw;
            if (j == 0) has_x1 = true;
            if (j == 1) has_x2 = true;
        }
    }
    CHECK(has_x1);
    CHECK(has_x2);
    CHECK(active_raw <= p / 2);
}

TEST_CASE("mcp cross-validation selector runs and keeps the signal") {
    Dataset data = linear_benchmark(250);
    McpConfig config;
    config.basis.degree = 2;
    config.selector = McpConfig::Selector::KFoldCv;
    config.cv_folds = 5;
    config.cv_seed = 13;
    PredictorPtr fit = fit_mcp_additive(data, config);
    std::vector<double> zero(data.p(), 0.0);
    auto grad = fit->gradient(zero);
    CHECK(grad[1] == approx_margin(5.0, 0.3));
}

TEST_CASE("mcp path-end selector takes the smallest penalty on the path") {
    Dataset data = linear_benchmark(250);
    McpConfig config;
    config.basis.degree = 2;
    config.selector = McpConfig::Selector::PathEnd;
    config.n_lambda = 40;
    config.lambda_min_ratio = 0.05;
    McpDiagnostics diag;
    PredictorPtr fit = fit_mcp_additive(data, config, &diag);
    CHECK(diag.selected_index == diag.lambda_path.size() - 1);

    McpConfig bic = config;
    bic.selector = McpConfig::Selector::Bic;
    McpDiagnostics diag_bic;
    fit_mcp_additive(data, bic, &diag_bic);
    // never sparser than the information-criterion pick
    CHECK(diag.nonzero_path[diag.selected_index] >=
          diag_bic.nonzero_path[diag_bic.selected_index]);

    std::vector<double> zero(data.p(), 0.0);
    auto grad = fit->gradient(zero);
    CHECK(grad[1] == approx_margin(5.0, 0.3));
}

TEST_CASE("mcp zeroed basis groups give exactly zero gradients") {
    Dataset data = linear_benchmark(400);
    McpConfig config;
    config.basis.degree = 3;
    PredictorPtr fit = fit_mcp_additive(data, config);
    Rng rng(15);
    std::vector<Matrix> grads;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> row(data.p());
        for (auto& v : row) v = rng.next_normal();
        auto g = fit->gradient(row);
        Matrix m(1, data.p());
        for (std::size_t j = 0; j < data.p(); ++j) m(0, j) = g[j];
        grads.push_back(m);
    }
    // a dropped basis group never leaks a small nonzero derivative: each
    // feature is either active or a bitwise zero at every probed row
    std::size_t dropped = 0;
    for (std::size_t j = 0; j < data.p(); ++j) {
        std::size_t zeros = 0;
        for (const auto& m : grads)
            if (m(0, j) == 0.0) ++zeros;
        CHECK((zeros == 0 || zeros == grads.size()));
        if (zeros == grads.size()) ++dropped;
    }
    CHECK(dropped >= 1); // the pure-noise features should not all survive
}

TEST_CASE("mcp validates gamma") {
    Dataset data = linear_benchmark(100);
    McpConfig config;
    config.gamma = 1.0;
    CHECK_THROWS_AS(fit_mcp_additive(data, config), ValidationError);
}

TEST_CASE("external predictor serves stored rows and refuses others") {
    Dataset data = linear_benchmark(50);
    ExternalPredictions preds;
    preds.yhat.resize(data.n());
    preds.gradients = Matrix(data.n(), data.p());
    for (std::size_t i = 0; i < data.n(); ++i) {
        preds.yhat[i] = static_cast<double>(i);
        for (std::size_t j = 0; j < data.p(); ++j)
            preds.gradients(i, j) = static_cast<double>(i * 10 + j);
    }
    PredictorPtr ext = wrap_external(data, preds);
    CHECK_FALSE(ext->supports_counterfactual_rows());
    CHECK(ext->descriptor() == "external");

    for (std::size_t i = 0; i < data.n(); ++i) {
        CHECK(ext->predict(data.x.row(i)) == static_cast<double>(i));
        auto g = ext->gradient(data.x.row(i));
        for (std::size_t j = 0; j < data.p(); ++j)
            CHECK(g[j] == static_cast<double>(i * 10 + j));
    }

    std::vector<double> off(data.x.row(0).begin(), data.x.row(0).end());
    off[1] += 1e-9;
    try {
        ext->predict(off);
        FAIL("expected a refusal");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("counterfactual") != std::string::npos);
    }
}

TEST_CASE("external predictor validates input sizes") {
    Dataset data = linear_benchmark(50);
    ExternalPredictions preds;
    preds.yhat.resize(49);
    preds.gradients = Matrix(50, 4);
    CHECK_THROWS_AS(wrap_external(data, preds), ValidationError);
    preds.yhat.resize(50);
    preds.gradients = Matrix(50, 3);
    CHECK_THROWS_AS(wrap_external(data, preds), ValidationError);
}
