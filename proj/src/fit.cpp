#include "qmoire/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qmoire/spectrum.hpp"

namespace qmoire::analysis {

namespace {

double cos2(double x, double phase, double period) {
    double c = std::cos(std::numbers::pi * (x - phase) / period);
    return c * c;
}

// parameter layout: [A, B, p1, (p2), phi1, (phi2)]
double eval_model(FitModel model, const std::vector<double>& th, double x) {
    if (model == FitModel::ProductCos2)
        return th[1] + th[0] * cos2(x, th[4], th[2]) * cos2(x, th[5], th[3]);
    return th[1] + th[0] * cos2(x, th[3], th[2]);
}

double sse(FitModel model, const std::vector<double>& th, const std::vector<double>& x,
           const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double r = y[k] - eval_model(model, th, x[k]);
        s += r * r;
    }
    return s;
}

bool period_index(FitModel model, std::size_t j) {
    return model == FitModel::ProductCos2 ? (j == 2 || j == 3) : j == 2;
}

// Solve the symmetric positive (damped) system H d = g in place; returns false
// when elimination breaks down.
bool solve_sym(std::vector<double> H, std::vector<double> g, std::size_t n, std::vector<double>& d) {
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t piv = i;
        for (std::size_t r = i + 1; r < n; ++r)
            if (std::fabs(H[r * n + i]) > std::fabs(H[piv * n + i])) piv = r;
        if (std::fabs(H[piv * n + i]) < 1e-300) return false;
        if (piv != i) {
            for (std::size_t c = 0; c < n; ++c) std::swap(H[i * n + c], H[piv * n + c]);
            std::swap(g[i], g[piv]);
        }
        for (std::size_t r = i + 1; r < n; ++r) {
            double f = H[r * n + i] / H[i * n + i];
            for (std::size_t c = i; c < n; ++c) H[r * n + c] -= f * H[i * n + c];
            g[r] -= f * g[i];
        }
    }
    d.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = g[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= H[i * n + c] * d[c];
        d[i] = acc / H[i * n + i];
    }
    return true;
}

struct LmOutcome {
    std::vector<double> theta;
    double sse = 0.0;
    bool converged = false;
    int iterations = 0;
};

LmOutcome levenberg(FitModel model, std::vector<double> th, const std::vector<double>& x,
                    const std::vector<double>& y, const FitOptions& opt) {
    const std::size_t np = th.size();
    const std::size_t n = x.size();
    double lambda = 1e-3;
    double current = sse(model, th, x, y);

    LmOutcome out;
    for (int iter = 1; iter <= opt.max_iterations; ++iter) {
        out.iterations = iter;
        // central-difference Jacobian of the model
        std::vector<double> J(n * np);
        for (std::size_t j = 0; j < np; ++j) {
            double h = 1e-6 * std::max(std::fabs(th[j]), 1.0);
            std::vector<double> tp = th, tm = th;
            tp[j] += h;
            tm[j] -= h;
            for (std::size_t k = 0; k < n; ++k)
                J[k * np + j] = (eval_model(model, tp, x[k]) - eval_model(model, tm, x[k])) / (2.0 * h);
        }
        std::vector<double> g(np, 0.0), H(np * np, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            double r = y[k] - eval_model(model, th, x[k]);
            for (std::size_t j = 0; j < np; ++j) {
                g[j] += J[k * np + j] * r;
                for (std::size_t c = j; c < np; ++c) H[j * np + c] += J[k * np + j] * J[k * np + c];
            }
        }
        for (std::size_t j = 0; j < np; ++j)
            for (std::size_t c = 0; c < j; ++c) H[j * np + c] = H[c * np + j];

        bool stepped = false;
        for (int attempt = 0; attempt < 40 && !stepped; ++attempt) {
            std::vector<double> Hd = H;
            for (std::size_t j = 0; j < np; ++j)
                Hd[j * np + j] += lambda * std::max(H[j * np + j], 1e-12);
            std::vector<double> d;
            if (!solve_sym(Hd, g, np, d)) {
                lambda *= 4.0;
                continue;
            }
            std::vector<double> cand = th;
            for (std::size_t j = 0; j < np; ++j) {
                cand[j] += d[j];
                if (period_index(model, j))
                    cand[j] = std::clamp(cand[j], opt.period_min_mm, opt.period_max_mm);
            }
            double trial = sse(model, cand, x, y);
            if (std::isfinite(trial) && trial <= current) {
                double rel_step = 0.0;
                for (std::size_t j = 0; j < np; ++j)
                    rel_step = std::max(rel_step, std::fabs(cand[j] - th[j]) / std::max(std::fabs(th[j]), 1.0));
                th = cand;
                current = trial;
                lambda = std::max(lambda / 3.0, 1e-12);
                stepped = true;
                if (rel_step < opt.step_tolerance) {
                    out.converged = true;
                }
            } else {
                lambda *= 4.0;
            }
        }
        if (out.converged || !stepped) break;
    }
    out.theta = th;
    out.sse = current;
    return out;
}

struct Series {
    std::vector<double> x, y;
};

Series decimate_to_local_maxima(const ScanRecord& data, double window) {
    Series s;
    std::size_t k = 0;
    double lo = data.positions_mm.front();
    const double end = data.positions_mm.back();
    while (lo <= end && k < data.size()) {
        double best_x = 0.0, best_y = -std::numeric_limits<double>::infinity();
        bool any = false;
        while (k < data.size() && data.positions_mm[k] < lo + window) {
            if (data.values[k] > best_y) {
                best_y = data.values[k];
                best_x = data.positions_mm[k];
            }
            any = true;
            ++k;
        }
        if (any) {
            s.x.push_back(best_x);
            s.y.push_back(best_y);
        }
        lo += window;
    }
    return s;
}

// linear least squares for y ~ A*m + B given a fixed modulation shape m(x)
void linear_amp_offset(const std::vector<double>& m, const std::vector<double>& y, double& A, double& B) {
    double sm = 0, sy = 0, smm = 0, smy = 0;
    const auto n = static_cast<double>(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        sm += m[k];
        sy += y[k];
        smm += m[k] * m[k];
        smy += m[k] * y[k];
    }
    double det = n * smm - sm * sm;
    if (std::fabs(det) < 1e-300) {
        A = 0.0;
        B = sy / n;
        return;
    }
    A = (n * smy - sm * sy) / det;
    B = (sy * smm - sm * smy) / det;
}

std::vector<SpectralPeak> peaks_or_empty(const ScanRecord& data) {
    try {
        return periodogram_peaks(data);
    } catch (const std::invalid_argument&) {
        return {};  // too few or non-uniform samples: fall back to heuristics
    }
}

void auto_init_product(const Series& s, const ScanRecord& data, const FitOptions& opt,
                       std::vector<double>& th, const FitInit& init) {
    double span = s.x.back() - s.x.front();
    double p1 = init.period1.value_or(0.0), p2 = init.period2.value_or(0.0);
    if (!(p1 > 0.0) || !(p2 > 0.0)) {
        auto peaks = peaks_or_empty(data);
        std::sort(peaks.begin(), peaks.end(),
                  [](const SpectralPeak& a, const SpectralPeak& b) { return a.power > b.power; });
        if (peaks.size() >= 2) {
            double fa = peaks[0].frequency_per_mm, fb = peaks[1].frequency_per_mm;
            if (!(p1 > 0.0)) p1 = 1.0 / std::max(fa, fb);
            if (!(p2 > 0.0)) p2 = 1.0 / std::min(fa, fb);
        } else {
            if (!(p1 > 0.0)) p1 = span / 5.0;
            if (!(p2 > 0.0)) p2 = span / 3.0;
        }
    }
    p1 = std::clamp(p1, opt.period_min_mm, opt.period_max_mm);
    p2 = std::clamp(p2, opt.period_min_mm, opt.period_max_mm);

    // coarse phase grid with linear amplitude/offset at each node
    double best_sse = std::numeric_limits<double>::infinity();
    double best[4] = {0, 0, 0, 0};
    const int ngrid = 12;
    std::vector<double> mvals(s.x.size());
    for (int i = 0; i < ngrid; ++i) {
        double f1 = init.phase1.value_or(static_cast<double>(i) * p1 / ngrid);
        for (int j = 0; j < ngrid; ++j) {
            double f2 = init.phase2.value_or(static_cast<double>(j) * p2 / ngrid);
            for (std::size_t k = 0; k < s.x.size(); ++k)
                mvals[k] = cos2(s.x[k], f1, p1) * cos2(s.x[k], f2, p2);
            double A, B;
            linear_amp_offset(mvals, s.y, A, B);
            double acc = 0.0;
            for (std::size_t k = 0; k < s.x.size(); ++k) {
                double r = s.y[k] - (A * mvals[k] + B);
                acc += r * r;
            }
            if (acc < best_sse) {
                best_sse = acc;
                best[0] = A;
                best[1] = B;
                best[2] = f1;
                best[3] = f2;
            }
            if (init.phase2) break;
        }
        if (init.phase1) break;
    }
    th = {init.amplitude.value_or(best[0]), init.offset.value_or(best[1]), p1, p2, best[2], best[3]};
}

void auto_init_envelope(const Series& s, const ScanRecord& data, const FitOptions& opt,
                        std::vector<double>& th, const FitInit& init) {
    double span = s.x.back() - s.x.front();
    double P = init.period1.value_or(0.0);
    if (!(P > 0.0)) {
        // the slow modulation is the beat line when one exists
        BeatEstimate beat;
        try {
            beat = beat_from_spectrum(data);
        } catch (const std::invalid_argument&) {
        }
        if (beat.detected) {
            P = beat.period_mm;
        } else {
            auto peaks = peaks_or_empty(data);
            if (!peaks.empty()) {
                auto strongest = std::max_element(peaks.begin(), peaks.end(),
                                                  [](const SpectralPeak& a, const SpectralPeak& b) {
                                                      return a.power < b.power;
                                                  });
                P = 1.0 / strongest->frequency_per_mm;
            } else {
                P = span / 2.0;
            }
        }
    }
    P = std::clamp(P, opt.period_min_mm, opt.period_max_mm);

    double best_sse = std::numeric_limits<double>::infinity();
    double best[3] = {0, 0, 0};
    const int ngrid = 16;
    std::vector<double> mvals(s.x.size());
    for (int i = 0; i < ngrid; ++i) {
        double phi = init.phase1.value_or(static_cast<double>(i) * P / ngrid);
        for (std::size_t k = 0; k < s.x.size(); ++k) mvals[k] = cos2(s.x[k], phi, P);
        double A, B;
        linear_amp_offset(mvals, s.y, A, B);
        double acc = 0.0;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            double r = s.y[k] - (A * mvals[k] + B);
            acc += r * r;
        }
        if (acc < best_sse) {
            best_sse = acc;
            best[0] = A;
            best[1] = B;
            best[2] = phi;
        }
        if (init.phase1) break;
    }
    th = {init.amplitude.value_or(best[0]), init.offset.value_or(best[1]), P, best[2]};
}

FitResult run_fit(FitModel model, const ScanRecord& data, const FitInit& init, const FitOptions& opt) {
    data.validate();
    if (data.size() < 8) throw std::invalid_argument("fit: need at least 8 samples");
    for (std::size_t k = 1; k < data.size(); ++k)
        if (!(data.positions_mm[k] > data.positions_mm[k - 1]))
            throw std::invalid_argument("fit: positions must be strictly increasing");
    if ((init.period1 && !(*init.period1 > 0.0)) || (init.period2 && !(*init.period2 > 0.0)))
        throw std::invalid_argument("fit: initial periods must be > 0");

    FitResult res;
    res.model = model;

    Series s;
    if (model == FitModel::EnvelopeCos2 && opt.fast_period_hint_mm) {
        if (!(*opt.fast_period_hint_mm > 0.0))
            throw std::invalid_argument("fit: fast period hint must be > 0");
        s = decimate_to_local_maxima(data, *opt.fast_period_hint_mm);
        if (s.x.size() < 4) {
            s.x = data.positions_mm;
            s.y = data.values;
        }
    } else {
        s.x = data.positions_mm;
        s.y = data.values;
    }

    double ymin = *std::min_element(s.y.begin(), s.y.end());
    double ymax = *std::max_element(s.y.begin(), s.y.end());
    double scale = std::max(std::fabs(ymax), std::fabs(ymin));
    if (ymax - ymin <= 1e-12 * std::max(scale, 1.0)) {
        // constant data: no modulation to fit
        res.identifiable = false;
        res.offset = (ymax + ymin) / 2.0;
        return res;
    }

    std::vector<double> th;
    if (model == FitModel::ProductCos2)
        auto_init_product(s, data, opt, th, init);
    else
        auto_init_envelope(s, data, opt, th, init);

    LmOutcome lm = levenberg(model, th, s.x, s.y, opt);
    res.amplitude = lm.theta[0];
    res.offset = lm.theta[1];
    res.period1 = lm.theta[2];
    if (model == FitModel::ProductCos2) {
        res.period2 = lm.theta[3];
        res.phase1 = lm.theta[4];
        res.phase2 = lm.theta[5];
    } else {
        res.phase1 = lm.theta[3];
        // B + A cos^2 == (B+A) - A cos^2 shifted by a half period; report the
        // nonnegative-amplitude branch
        if (res.amplitude < 0.0) {
            res.offset += res.amplitude;
            res.amplitude = -res.amplitude;
            res.phase1 += res.period1 / 2.0;
        }
    }
    auto wrap = [](double phi, double p) { return phi - p * std::floor(phi / p); };
    res.phase1 = wrap(res.phase1, res.period1);
    if (model == FitModel::ProductCos2) res.phase2 = wrap(res.phase2, res.period2);
    res.residual_norm = std::sqrt(lm.sse);
    res.converged = lm.converged;
    res.iterations = lm.iterations;
    if (std::fabs(res.amplitude) <= 1e-9 * std::max(ymax - ymin, 1e-30)) res.identifiable = false;
    return res;
}

}  // namespace

FitResult fit_product_cos2(const ScanRecord& data, const FitInit& init, const FitOptions& options) {
    return run_fit(FitModel::ProductCos2, data, init, options);
}

FitResult fit_envelope_cos2(const ScanRecord& data, const FitInit& init, const FitOptions& options) {
    return run_fit(FitModel::EnvelopeCos2, data, init, options);
}

}  // namespace qmoire::analysis
