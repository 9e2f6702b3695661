#include "rough/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <vector>

#include "rough/capacity.hpp"
#include "rough/errors.hpp"
#include "rough/lift.hpp"
#include "rough/metrics.hpp"
#include "rough/parallel.hpp"
#include "rough/rde.hpp"
#include "rough/stats.hpp"

namespace rough {

namespace {

std::string fd(double v) { return format_double(v); }
std::string fi(long long v) { return format_int(v); }

// parallel_for_tasks with exceptions carried back to the caller; the lowest
// failing task index wins so the reported error does not depend on timing.
template <typename F>
void parallel_tasks_checked(int threads, std::size_t n, F&& body) {
    std::vector<std::exception_ptr> errs(n);
    parallel_for_tasks(threads, n, [&](std::size_t i) {
        try {
            body(i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    });
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

Interval mean_interval(const std::vector<double>& x) {
    if (x.size() < 2) return Interval{x.front(), x.front()};
    return t_interval_mean(x);
}

// Level-1 part of the lift node over [t_n^{k-1}, t_n^k] of w^(m), read
// directly off the sample vertices. Bitwise-identical to the node stored by
// lift_dyadic: at or above the segment scale it is the same vertex
// difference; below it the construction collapses to an exact power-of-two
// scaling of the segment increment.
void level1_of(const GridSample& s, int m, int n, int k, Eigen::VectorXd& out) {
    if (n <= m) {
        const int stride = 1 << (s.level - n);
        out = (s.values.row(k * stride) - s.values.row((k - 1) * stride)).transpose();
    } else {
        const int seg = (k - 1) >> (n - m);
        const int stride = 1 << (s.level - m);
        out = std::ldexp(1.0, m - n) *
              (s.values.row((seg + 1) * stride) - s.values.row(seg * stride)).transpose();
    }
}

// rho at tensor level 1 between the lifts of w^(m) and w^(m+1), without
// materializing the trees. Matches rho() on the materialized lifts exactly;
// the unit tests pin that equality.
double pair_rho1_vertices(const GridSample& sample, int m, const MetricParams& params) {
    params.validate();
    if (m + 1 > sample.level)
        throw ConfigError("pair_rho1_vertices: needs sample.level >= m + 1");
    if (params.n_max > sample.level)
        throw ConfigError("pair_rho1_vertices: needs sample.level >= n_max");
    const int d = sample.dim;
    const double q = params.p;
    Eigen::VectorXd va(d), vb(d), diff(d);
    double total = 0.0;
    for (int n = 1; n <= params.n_max; ++n) {
        const double weight = std::pow(static_cast<double>(n), params.gamma);
        double level_sum = 0.0;
        for (int k = 1; k <= (1 << n); ++k) {
            level1_of(sample, m, n, k, va);
            level1_of(sample, m + 1, n, k, vb);
            diff = va - vb;
            level_sum += std::pow(diff.norm(), q);
        }
        total += weight * level_sum;
    }
    return std::pow(total, 1.0 / q);
}

double pair_rho_level(const GridSample& sample, int m, const MetricParams& params, int level) {
    if (level == 1) return pair_rho1_vertices(sample, m, params);
    const DyadicLift a = lift_dyadic(sample, m, params.n_max);
    const DyadicLift b = lift_dyadic(sample, m + 1, params.n_max);
    return rho(a, b, level, params);
}

}  // namespace

CsvTable run_converge(const ExperimentConfig& cfg, int threads) {
    const std::string hash = cfg.hash_hex();
    const int n_max = cfg.metric.n_max;
    const std::vector<int>& ms = cfg.m_list;
    const std::size_t S = cfg.seeds.size();
    const std::size_t M = ms.size();

    std::vector<std::vector<double>> dp_vals(S, std::vector<double>(M));
    std::vector<std::vector<double>> hl_vals(S, std::vector<double>(M));

    parallel_tasks_checked(threads, S, [&](std::size_t si) {
        const GridSample sample = sample_one(cfg.model, cfg.level, cfg.dim, cfg.seeds[si], 0);
        std::map<int, DyadicLift> lifts;
        for (int m : ms)
            for (int lvl : {m, m + 1})
                if (!lifts.count(lvl)) lifts.emplace(lvl, lift_dyadic(sample, lvl, n_max));
        for (std::size_t mi = 0; mi < M; ++mi) {
            const DyadicLift& a = lifts.at(ms[mi]);
            const DyadicLift& b = lifts.at(ms[mi] + 1);
            dp_vals[si][mi] = dp_exact(a, b, cfg.metric, n_max);
            hl_vals[si][mi] = hl_bound(hl_rho_values(a, b, cfg.metric), cfg.metric);
        }
    });

    CsvTable table({"config_hash", "stat", "seed", "m", "value", "lo", "hi"});
    for (std::size_t si = 0; si < S; ++si)
        for (std::size_t mi = 0; mi < M; ++mi)
            table.add_row({hash, "dp_pair", fi(static_cast<long long>(cfg.seeds[si])),
                           fi(ms[mi]), fd(dp_vals[si][mi]), "", ""});
    for (std::size_t si = 0; si < S; ++si)
        for (std::size_t mi = 0; mi < M; ++mi)
            table.add_row({hash, "hl_pair", fi(static_cast<long long>(cfg.seeds[si])),
                           fi(ms[mi]), fd(hl_vals[si][mi]), "", ""});

    std::vector<double> col(S);
    for (std::size_t mi = 0; mi < M; ++mi) {
        for (std::size_t si = 0; si < S; ++si) col[si] = dp_vals[si][mi];
        const Interval iv = mean_interval(col);
        table.add_row({hash, "dp_mean", "", fi(ms[mi]), fd(mean(col)), fd(iv.lo), fd(iv.hi)});
        table.add_row({hash, "dp_median", "", fi(ms[mi]), fd(median(col)), "", ""});
    }
    for (std::size_t mi = 0; mi + 1 < M; ++mi) {
        std::vector<double> ratios(S);
        for (std::size_t si = 0; si < S; ++si)
            ratios[si] = dp_vals[si][mi + 1] / dp_vals[si][mi];
        table.add_row({hash, "dp_ratio_median", "", fi(ms[mi]), fd(median(ratios)), "", ""});
    }
    for (std::size_t mi = 0; mi < M; ++mi) {
        for (std::size_t si = 0; si < S; ++si) col[si] = hl_vals[si][mi];
        table.add_row({hash, "hl_median", "", fi(ms[mi]), fd(median(col)), "", ""});
    }
    return table;
}

CsvTable run_l2rates(const ExperimentConfig& cfg, int threads) {
    const std::string hash = cfg.hash_hex();
    const std::vector<int>& ms = cfg.m_list;
    const std::vector<int>& ns = cfg.n_list;
    const std::size_t M = ms.size();
    const std::size_t NN = ns.size();
    const std::size_t S = static_cast<std::size_t>(cfg.samples);
    const std::uint64_t seed = cfg.seeds[0];
    const int n_top = *std::max_element(ns.begin(), ns.end());
    const std::size_t cells = M * NN * 3;

    std::vector<double> diff_sq(S * cells), single_sq(S * cells);

    parallel_tasks_checked(threads, S, [&](std::size_t si) {
        const GridSample sample = sample_one(cfg.model, cfg.level, cfg.dim, seed, si);
        std::map<int, DyadicLift> lifts;
        for (int m : ms)
            for (int lvl : {m, m + 1})
                if (!lifts.count(lvl)) lifts.emplace(lvl, lift_dyadic(sample, lvl, n_top));
        for (std::size_t mi = 0; mi < M; ++mi) {
            const DyadicLift& a = lifts.at(ms[mi]);
            const DyadicLift& b = lifts.at(ms[mi] + 1);
            for (std::size_t ni = 0; ni < NN; ++ni) {
                const int n = ns[ni];
                double dsq[3] = {0.0, 0.0, 0.0};
                double ssq[3] = {0.0, 0.0, 0.0};
                for (int k = 1; k <= (1 << n); ++k) {
                    const TruncatedTensor& ta = a.node(n, k);
                    const TruncatedTensor& tb = b.node(n, k);
                    dsq[0] += (ta.level1() - tb.level1()).squaredNorm();
                    dsq[1] += (ta.level2() - tb.level2()).squaredNorm();
                    dsq[2] += (ta.level3() - tb.level3()).squaredNorm();
                    for (int lvl = 1; lvl <= 3; ++lvl) {
                        const double nn = ta.level_norm(lvl);
                        ssq[lvl - 1] += nn * nn;
                    }
                }
                const double inv_k = 1.0 / (1 << n);
                const std::size_t at = (si * M + mi) * NN * 3 + ni * 3;
                for (int lvl = 0; lvl < 3; ++lvl) {
                    diff_sq[at + lvl] = dsq[lvl] * inv_k;
                    single_sq[at + lvl] = ssq[lvl] * inv_k;
                }
            }
        }
    });

    CsvTable table({"config_hash", "stat", "i", "m", "n", "value", "lo", "hi"});
    // value(i, m, n) = sqrt(mean over samples); kept for the slope fits below
    std::vector<double> dval(cells), sval(cells);
    std::vector<double> col(S);
    const auto emit = [&](const char* stat, const std::vector<double>& flat,
                          std::vector<double>& out) {
        for (int lvl = 1; lvl <= 3; ++lvl)
            for (std::size_t mi = 0; mi < M; ++mi)
                for (std::size_t ni = 0; ni < NN; ++ni) {
                    const std::size_t cell = (mi * NN + ni) * 3 + (lvl - 1);
                    for (std::size_t si = 0; si < S; ++si) col[si] = flat[si * cells + cell];
                    const double m2 = mean(col);
                    const Interval iv = mean_interval(col);
                    const double v = std::sqrt(m2);
                    out[cell] = v;
                    table.add_row({hash, stat, fi(lvl), fi(ms[mi]), fi(ns[ni]), fd(v),
                                   fd(std::sqrt(std::max(0.0, iv.lo))),
                                   fd(std::sqrt(std::max(0.0, iv.hi)))});
                }
    };
    emit("l2_diff", diff_sq, dval);
    emit("l2_single", single_sq, sval);

    // log2 slope of the difference in m at fixed n, over the rows with n <= m.
    for (int lvl = 1; lvl <= 3; ++lvl)
        for (std::size_t ni = 0; ni < NN; ++ni) {
            std::vector<double> xs, ys;
            bool ok = true;
            for (std::size_t mi = 0; mi < M; ++mi) {
                if (ms[mi] < ns[ni]) continue;
                const double v = dval[(mi * NN + ni) * 3 + (lvl - 1)];
                if (!(v > 0.0)) {
                    ok = false;
                    break;
                }
                xs.push_back(ms[mi]);
                ys.push_back(std::log2(v));
            }
            const double slope =
                (ok && xs.size() >= 2) ? linear_fit(xs, ys).slope
                                       : std::numeric_limits<double>::quiet_NaN();
            table.add_row({hash, "slope_m", fi(lvl), "", fi(ns[ni]), fd(slope), "", ""});
        }

    // log2 slope of the difference in n at fixed m, over the rows with n > m.
    for (int lvl = 1; lvl <= 3; ++lvl)
        for (std::size_t mi = 0; mi < M; ++mi) {
            std::vector<double> xs, ys;
            bool ok = true;
            for (std::size_t ni = 0; ni < NN; ++ni) {
                if (ns[ni] <= ms[mi]) continue;
                const double v = dval[(mi * NN + ni) * 3 + (lvl - 1)];
                if (!(v > 0.0)) {
                    ok = false;
                    break;
                }
                xs.push_back(ns[ni]);
                ys.push_back(std::log2(v));
            }
            const double slope =
                (ok && xs.size() >= 2) ? linear_fit(xs, ys).slope
                                       : std::numeric_limits<double>::quiet_NaN();
            table.add_row({hash, "slope_n", fi(lvl), fi(ms[mi]), "", fd(slope), "", ""});
        }
    return table;
}

CsvTable run_ldp1d(const ExperimentConfig& cfg, int /*threads*/) {
    const std::string hash = cfg.hash_hex();
    const std::vector<double>& eps = cfg.eps_list;
    const double b = cfg.cap_b, q = cfg.cap_q;
    const int degree = cfg.cap_degree;

    std::vector<double> upper_log(eps.size()), lower_log(eps.size());
    for (std::size_t j = 0; j < eps.size(); ++j) {
        upper_log[j] = capacity_upper_1d_log(b, eps[j], q, degree);
        lower_log[j] = gaussian_tail_log(b / eps[j]) / q;
    }
    const SlopeFit fit_upper = ldp_slope_fit_log(eps, upper_log);
    const SlopeFit fit_lower = ldp_slope_fit_log(eps, lower_log);

    CsvTable table({"config_hash", "stat", "eps", "value"});
    for (std::size_t j = 0; j < eps.size(); ++j)
        table.add_row({hash, "upper_log", fd(eps[j]), fd(upper_log[j])});
    for (std::size_t j = 0; j < eps.size(); ++j)
        table.add_row({hash, "lower_log", fd(eps[j]), fd(lower_log[j])});
    for (std::size_t j = 0; j < eps.size(); ++j)
        table.add_row({hash, "eps2_log_upper", fd(eps[j]), fd(fit_upper.sequence[j])});
    for (std::size_t j = 0; j < eps.size(); ++j)
        table.add_row({hash, "eps2_log_lower", fd(eps[j]), fd(fit_lower.sequence[j])});
    table.add_row({hash, "fit_upper", "", fd(fit_upper.limit)});
    table.add_row({hash, "fit_lower", "", fd(fit_lower.limit)});
    table.add_row({hash, "fit_upper_residual", "", fd(fit_upper.residual_rms)});
    table.add_row({hash, "fit_lower_residual", "", fd(fit_lower.residual_rms)});
    table.add_row({hash, "target", "", fd(-b * b / (2.0 * q))});
    return table;
}

CsvTable run_tailrates(const ExperimentConfig& cfg, int threads) {
    const std::string hash = cfg.hash_hex();
    CsvTable table({"config_hash", "stat", "m", "lambda", "eps", "value", "lo", "hi"});
    table.add_row({hash, "theta", "", "", "", fd(cfg.theta), "", ""});
    table.add_row({hash, "n_tilde", "", "", "", fi(cfg.n_tilde), "", ""});

    if (cfg.kind == "tailrates") {
        const std::vector<int>& ms = cfg.m_list;
        std::vector<double> logb(ms.size());
        for (std::size_t mi = 0; mi < ms.size(); ++mi) {
            logb[mi] = tail_capacity_bound_log(TailKind::difference, cfg.tail_params(ms[mi]));
            table.add_row({hash, "log_bound_m", fi(ms[mi]), fd(cfg.cap_lambda), "",
                           fd(logb[mi]), "", ""});
        }
        for (std::size_t mi = 0; mi + 1 < ms.size(); ++mi) {
            const double slope = (logb[mi + 1] - logb[mi]) / (ms[mi + 1] - ms[mi]);
            table.add_row({hash, "slope_m", fi(ms[mi]), "", "", fd(slope), "", ""});
        }
        table.add_row({hash, "slope_m_closed", "", "", "",
                       fd(tail_decay_exponent(cfg.tail_params(0)) * std::log(0.5)), "", ""});

        const int m0 = ms.front();
        const std::vector<double> lambdas = cfg.lambda_sweep();
        std::vector<double> logl(lambdas.size());
        for (std::size_t j = 0; j < lambdas.size(); ++j) {
            TailParams tp = cfg.tail_params(m0);
            tp.lambda = lambdas[j];
            logl[j] = tail_capacity_bound_log(TailKind::difference, tp);
            table.add_row({hash, "log_bound_lambda", fi(m0), fd(lambdas[j]), "",
                           fd(logl[j]), "", ""});
        }
        for (std::size_t j = 0; j + 1 < lambdas.size(); ++j) {
            const double slope = (logl[j + 1] - logl[j]) /
                                 (std::log(lambdas[j + 1]) - std::log(lambdas[j]));
            table.add_row({hash, "slope_lambda", fi(m0), fd(lambdas[j]), "", fd(slope), "", ""});
        }
        table.add_row({hash, "slope_lambda_closed", "", "", "",
                       fd(-2.0 * cfg.n_tilde), "", ""});
        table.add_row({hash, "summable_analytic", "", "", "",
                       fi(tail_summable_analytic(cfg.tail_params(0)) ? 1 : 0), "", ""});
        table.add_row({hash, "summable_geometric", "", "", "",
                       fi(tail_summable_geometric(cfg.tail_params(0)) ? 1 : 0), "", ""});
    }

    // Monte Carlo exceedance trend. Dilation enters through the exact level
    // homogeneity rho_i(dilate(a, eps), dilate(b, eps)) = eps^i rho_i(a, b).
    const std::vector<int>& mes = cfg.m_emp;
    const std::size_t ME = mes.size();
    const std::size_t S = static_cast<std::size_t>(cfg.samples);
    const std::uint64_t seed = cfg.seeds[0];
    std::vector<double> rhos(S * ME);
    parallel_tasks_checked(threads, S, [&](std::size_t si) {
        const GridSample sample = sample_one(cfg.model, cfg.level, cfg.dim, seed, si);
        for (std::size_t mi = 0; mi < ME; ++mi)
            rhos[si * ME + mi] = pair_rho_level(sample, mes[mi], cfg.metric, cfg.cap_level);
    });

    const double lambda0 = cfg.cap_lambda;
    for (std::size_t mi = 0; mi < ME; ++mi)
        for (double e : cfg.eps_list) {
            const double scale = std::pow(e, cfg.cap_level);
            std::size_t hits = 0;
            for (std::size_t si = 0; si < S; ++si)
                if (scale * rhos[si * ME + mi] > lambda0) ++hits;
            const double p = static_cast<double>(hits) / static_cast<double>(S);
            const Interval w = wilson_interval(hits, S);
            table.add_row({hash, "p_hat", fi(mes[mi]), fd(lambda0), fd(e), fd(p), fd(w.lo),
                           fd(w.hi)});
            const double stat = e * e * std::log(p) / cfg.cap_q;
            table.add_row({hash, "eps2_log_cap", fi(mes[mi]), fd(lambda0), fd(e), fd(stat),
                           "", ""});
        }

    // Sandwich rows: undilated exceedance against the analytic bound across
    // the threshold sweep, at the coarsest empirical m.
    const int m0 = mes.front();
    for (double lam : cfg.lambda_sweep()) {
        std::size_t hits = 0;
        for (std::size_t si = 0; si < S; ++si)
            if (rhos[si * ME] > lam) ++hits;
        const double p = static_cast<double>(hits) / static_cast<double>(S);
        const Interval w = wilson_interval(hits, S);
        TailParams tp = cfg.tail_params(m0);
        tp.lambda = lam;
        const double bound = tail_capacity_bound(TailKind::difference, tp);
        const double cap_lower = capacity_lower_from_prob(p, cfg.cap_q);
        table.add_row({hash, "sandwich_p_hat", fi(m0), fd(lam), "", fd(p), fd(w.lo), fd(w.hi)});
        table.add_row({hash, "sandwich_bound", fi(m0), fd(lam), "", fd(bound), "", ""});
        table.add_row({hash, "sandwich_ok", fi(m0), fd(lam), "",
                       fi(bound >= cap_lower ? 1 : 0), "", ""});
    }
    return table;
}

CsvTable run_rde_wz(const ExperimentConfig& cfg, int threads) {
    const std::string hash = cfg.hash_hex();
    const int m_lo = *std::min_element(cfg.m_list.begin(), cfg.m_list.end());
    const int m_hi = *std::max_element(cfg.m_list.begin(), cfg.m_list.end());
    const std::size_t M = static_cast<std::size_t>(m_hi - m_lo + 1);
    const std::size_t S = cfg.seeds.size();
    const VectorFieldSet fields = cfg.rde.build_fields();

    std::vector<std::vector<double>> sup(S, std::vector<double>(M));
    parallel_tasks_checked(threads, S, [&](std::size_t si) {
        const GridSample sample = sample_one(cfg.model, cfg.level, cfg.dim, cfg.seeds[si], 0);
        const std::vector<WzRow> rows =
            wz_convergence(cfg.rde.x0, fields, sample, m_lo, m_hi, cfg.rde.substeps);
        for (std::size_t mi = 0; mi < M; ++mi) sup[si][mi] = rows[mi].sup_distance;
    });

    CsvTable table({"config_hash", "stat", "seed", "m", "value", "lo", "hi"});
    for (std::size_t si = 0; si < S; ++si)
        for (std::size_t mi = 0; mi < M; ++mi)
            table.add_row({hash, "supdist", fi(static_cast<long long>(cfg.seeds[si])),
                           fi(m_lo + static_cast<int>(mi)), fd(sup[si][mi]), "", ""});

    std::vector<double> col(S);
    for (std::size_t mi = 0; mi < M; ++mi) {
        for (std::size_t si = 0; si < S; ++si) col[si] = sup[si][mi];
        const Interval iv = mean_interval(col);
        table.add_row({hash, "supdist_mean", "", fi(m_lo + static_cast<int>(mi)),
                       fd(mean(col)), fd(iv.lo), fd(iv.hi)});
        table.add_row({hash, "supdist_median", "", fi(m_lo + static_cast<int>(mi)),
                       fd(median(col)), "", ""});
    }
    for (std::size_t mi = 1; mi < M; ++mi) {
        std::vector<double> ratios(S);
        for (std::size_t si = 0; si < S; ++si) ratios[si] = sup[si][mi] / sup[si][mi - 1];
        table.add_row({hash, "ratio_median", "", fi(m_lo + static_cast<int>(mi)),
                       fd(median(ratios)), "", ""});
    }
    return table;
}

CsvTable run_experiment(const ExperimentConfig& cfg, int threads) {
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (cfg.kind == "converge") return run_converge(cfg, threads);
    if (cfg.kind == "l2rates") return run_l2rates(cfg, threads);
    if (cfg.kind == "ldp1d") return run_ldp1d(cfg, threads);
    if (cfg.kind == "tailrates" || cfg.kind == "expgood") return run_tailrates(cfg, threads);
    if (cfg.kind == "rde-wz") return run_rde_wz(cfg, threads);
    throw ConfigError("unknown experiment kind '" + cfg.kind + "'");
}

std::string json_mirror_path(const std::string& csv_path) {
    if (csv_path.size() >= 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
        return csv_path.substr(0, csv_path.size() - 4) + ".json";
    return csv_path + ".json";
}

}  // namespace rough
