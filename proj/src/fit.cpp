#include "perc/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace perc {

namespace {

struct WlsResult {
    double slope = 0, intercept = 0, r_squared = 0;
};

WlsResult weighted_log_ls(const std::vector<FitPoint>& pts) {
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    auto weight = [](const FitPoint& pt) {
        if (pt.y_stderr <= 0) return 1e12; // exact point
        double rel = pt.y_stderr / pt.y;
        return 1.0 / (rel * rel);
    };
    for (const FitPoint& pt : pts) {
        double w = weight(pt), x = std::log(pt.x), y = std::log(pt.y);
        sw += w;
        swx += w * x;
        swy += w * y;
        swxx += w * x * x;
        swxy += w * x * y;
    }
    WlsResult r;
    double det = sw * swxx - swx * swx;
    if (det == 0) throw std::invalid_argument("degenerate fit: all x equal");
    r.slope = (sw * swxy - swx * swy) / det;
    r.intercept = (swy - r.slope * swx) / sw;
    double ss_res = 0, ss_tot = 0, ybar = swy / sw;
    for (const FitPoint& pt : pts) {
        double w = weight(pt), x = std::log(pt.x), y = std::log(pt.y);
        double f = r.intercept + r.slope * x;
        ss_res += w * (y - f) * (y - f);
        ss_tot += w * (y - ybar) * (y - ybar);
    }
    r.r_squared = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return r;
}

} // namespace

PowerLawFit fit_power_law(std::vector<FitPoint> points) {
    std::vector<FitPoint> used;
    for (const FitPoint& pt : points) {
        if (!(pt.x > 0) || !(pt.y > 0))
            throw std::invalid_argument("power-law fit needs positive x and y");
        if (pt.y_stderr > 0 && pt.y_stderr / pt.y > 0.5) continue; // too noisy for log space
        used.push_back(pt);
    }
    if (used.size() < 3) throw std::invalid_argument("power-law fit needs at least 3 usable points");

    WlsResult full = weighted_log_ls(used);
    PowerLawFit fit;
    fit.exponent = full.slope;
    fit.amplitude = std::exp(full.intercept);
    fit.r_squared = full.r_squared;
    fit.points_used = int(used.size());
    fit.window_lo = used.front().x;
    fit.window_hi = used.front().x;
    for (const FitPoint& pt : used) {
        fit.window_lo = std::min(fit.window_lo, pt.x);
        fit.window_hi = std::max(fit.window_hi, pt.x);
    }

    // leave-one-out jackknife over points: finite-size drift dominates the
    // regression's internal error, so resampling the sizes is the honest bar
    const std::size_t n = used.size();
    std::vector<double> loo(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<FitPoint> sub;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sub.push_back(used[j]);
        loo[i] = weighted_log_ls(sub).slope;
    }
    double mean = 0;
    for (double v : loo) mean += v;
    mean /= double(n);
    double ss = 0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    fit.stderr_exponent = std::sqrt(double(n - 1) / double(n) * ss);
    return fit;
}

ScalingLawReport scaling_law_report(ExponentInput alpha, ExponentInput beta, ExponentInput gamma,
                                    ExponentInput nu, ExponentInput rho) {
    ScalingLawReport rep;
    auto make = [](const std::string& name, const std::string& formula) {
        ScalingLaw law;
        law.name = name;
        law.formula = formula;
        return law;
    };

    {
        ScalingLaw law = make("hyperscaling", "alpha = 2 - 2 nu");
        if (!alpha.value || !nu.value) {
            law.missing = !alpha.value ? (!nu.value ? "alpha, nu" : "alpha") : "nu";
        } else {
            law.evaluated = true;
            law.residual = *alpha.value - (2.0 - 2.0 * *nu.value);
            law.stderr_ = std::sqrt(alpha.stderr_ * alpha.stderr_ +
                                    4.0 * nu.stderr_ * nu.stderr_);
            law.violated = std::abs(law.residual) > 2.0 * law.stderr_;
        }
        rep.laws.push_back(law);
    }
    {
        ScalingLaw law = make("beta", "beta = nu / rho");
        if (!beta.value || !nu.value || !rho.value) {
            std::string miss;
            if (!beta.value) miss += "beta ";
            if (!nu.value) miss += "nu ";
            if (!rho.value) miss += "rho ";
            law.missing = miss;
        } else {
            law.evaluated = true;
            const double r = *rho.value, v = *nu.value;
            law.residual = *beta.value - v / r;
            double d_nu = -1.0 / r;
            double d_rho = v / (r * r);
            law.stderr_ = std::sqrt(beta.stderr_ * beta.stderr_ +
                                    d_nu * d_nu * nu.stderr_ * nu.stderr_ +
                                    d_rho * d_rho * rho.stderr_ * rho.stderr_);
            law.violated = std::abs(law.residual) > 2.0 * law.stderr_;
        }
        rep.laws.push_back(law);
    }
    {
        ScalingLaw law = make("gamma", "gamma = nu (2 - 2/rho)");
        if (!gamma.value || !nu.value || !rho.value) {
            std::string miss;
            if (!gamma.value) miss += "gamma ";
            if (!nu.value) miss += "nu ";
            if (!rho.value) miss += "rho ";
            law.missing = miss;
        } else {
            law.evaluated = true;
            const double r = *rho.value, v = *nu.value;
            law.residual = *gamma.value - v * (2.0 - 2.0 / r);
            double d_nu = -(2.0 - 2.0 / r);
            double d_rho = -2.0 * v / (r * r);
            law.stderr_ = std::sqrt(gamma.stderr_ * gamma.stderr_ +
                                    d_nu * d_nu * nu.stderr_ * nu.stderr_ +
                                    d_rho * d_rho * rho.stderr_ * rho.stderr_);
            law.violated = std::abs(law.residual) > 2.0 * law.stderr_;
        }
        rep.laws.push_back(law);
    }
    return rep;
}

KappaThirdWindow kappa_third_window(const std::vector<DerivativeProfile>& profiles) {
    if (profiles.size() < 2)
        throw std::invalid_argument("need profiles at two sizes or more");
    const DerivativeProfile& big = profiles.back();
    const DerivativeProfile& second = profiles[profiles.size() - 2];
    if (big.p_grid != second.p_grid)
        throw std::invalid_argument("profiles must share the p grid");

    KappaThirdWindow out;
    std::vector<FitPoint> pts;
    for (std::size_t i = 0; i < big.p_grid.size(); ++i) {
        double p = big.p_grid[i];
        if (!(p < 0.5)) continue;
        double diff = std::abs(big.value[i] - second.value[i]);
        double tol = 2.0 * std::sqrt(big.stderr_[i] * big.stderr_[i] +
                                     second.stderr_[i] * second.stderr_[i]);
        if (diff > tol) continue; // not size-stable
        out.stable_ps.push_back(p);
        if (!(big.value[i] > 0)) out.sign_ok = false;
        pts.push_back({0.5 - p, std::abs(big.value[i]), big.stderr_[i]});
    }
    out.window_empty = pts.size() < 3;
    if (!out.window_empty) out.fit = fit_power_law(pts);
    return out;
}

} // namespace perc
