#include "dmsens/screening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dmsens/distance_correlation.hpp"
#include "dmsens/fdiv.hpp"
#include "dmsens/permutation.hpp"

namespace dmsens {

std::string screen_measure_name(ScreenMeasure m) {
    switch (m) {
        case ScreenMeasure::dcor: return "dcor";
        case ScreenMeasure::hsic: return "hsic";
        case ScreenMeasure::ksg_mi: return "ksg_mi";
    }
    return "?";
}

std::string stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::stabilized: return "stabilized";
        case StopReason::max_size: return "max_size";
        case StopReason::threshold: return "threshold";
    }
    return "?";
}

ThresholdPolicy ThresholdPolicy::permutation_quantile(double level, std::size_t B,
                                                      RngSeed seed) {
    ThresholdPolicy p;
    p.kind = Kind::permutation_quantile;
    p.level = level;
    p.B = B;
    p.seed = seed;
    return p;
}

ThresholdPolicy ThresholdPolicy::top_fraction(double q) {
    ThresholdPolicy p;
    p.kind = Kind::top_fraction;
    p.fraction = q;
    return p;
}

ColumnSelector input_complement(const DataMatrix& data, const ColumnSelector& output_cols) {
    data.check_selector(output_cols);
    std::set<std::size_t> outs(output_cols.indices.begin(), output_cols.indices.end());
    ColumnSelector inputs;
    for (std::size_t j = 0; j < data.n_cols(); ++j)
        if (!outs.count(j)) inputs.indices.push_back(j);
    if (inputs.indices.empty()) throw Error("no input columns left after removing outputs");
    return inputs;
}

namespace {

ColumnKind block_kind(const DataMatrix& data, const ColumnSelector& sel) {
    return (sel.size() == 1 && data.kind(sel.indices[0]) == ColumnKind::categorical)
               ? ColumnKind::categorical
               : ColumnKind::continuous;
}

/// Marginal / pairwise dependence evaluations used by the ranking methods.
struct MeasureContext {
    const DataMatrix& data;
    ColumnSelector output_cols;
    ScreenMeasure measure;
    Matrix y;
    ColumnKind y_kind;

    MeasureContext(const DataMatrix& d, const ColumnSelector& out, ScreenMeasure m)
        : data(d), output_cols(out), measure(m), y(d.select(out)),
          y_kind(block_kind(d, out)) {
        if (m == ScreenMeasure::ksg_mi && y.cols() != 1)
            throw SizeMismatchError("ksg_mi screening requires a scalar output");
    }

    double against_output(std::size_t col) const {
        Matrix x = data.select(ColumnSelector::single(col));
        switch (measure) {
            case ScreenMeasure::dcor: return dcor(x, y);
            case ScreenMeasure::hsic: {
                HsicConfig cfg;
                cfg.y_kind = y_kind;
                return hsic_r(x, y, cfg);
            }
            case ScreenMeasure::ksg_mi: {
                std::vector<double> xv = data.column(col), yv(y.rows());
                for (std::size_t i = 0; i < y.rows(); ++i) yv[i] = y(i, 0);
                return ksg_mi(xv, yv, 4);
            }
        }
        return 0.0;
    }

    double between_inputs(std::size_t a, std::size_t b) const {
        Matrix xa = data.select(ColumnSelector::single(a));
        Matrix xb = data.select(ColumnSelector::single(b));
        switch (measure) {
            case ScreenMeasure::dcor: return dcor(xa, xb);
            case ScreenMeasure::hsic: return hsic_r(xa, xb);
            case ScreenMeasure::ksg_mi:
                return ksg_mi(data.column(a), data.column(b), 4);
        }
        return 0.0;
    }
};

}  // namespace

ScreeningResult max_relevance_rank(const DataMatrix& data, const ColumnSelector& output_cols,
                                   ScreenMeasure measure) {
    ColumnSelector inputs = input_complement(data, output_cols);
    MeasureContext ctx(data, output_cols, measure);
    std::size_t p = inputs.size();
    std::vector<double> scores(p, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(p); ++kk) {
        std::size_t k = static_cast<std::size_t>(kk);
        scores[k] = ctx.against_output(inputs.indices[k]);
    }
    std::vector<std::size_t> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];  // stable sort keeps index order on ties
    });
    ScreeningResult result;
    result.stop_reason = StopReason::max_size;
    result.marginal_scores = scores;
    for (std::size_t r = 0; r < p; ++r) {
        result.selected.indices.push_back(inputs.indices[order[r]]);
        result.scores.push_back(scores[order[r]]);
    }
    return result;
}

double mrmr_objective(const DataMatrix& data, const ColumnSelector& output_cols,
                      ScreenMeasure measure, const std::vector<std::size_t>& subset) {
    MeasureContext ctx(data, output_cols, measure);
    double m = static_cast<double>(subset.size());
    double rel = 0.0, red = 0.0;
    for (std::size_t a : subset) rel += ctx.against_output(a);
    for (std::size_t a : subset)
        for (std::size_t b : subset)
            red += (a == b) ? 1.0 : ctx.between_inputs(a, b);
    // Diagonal D(X, X) of the normalized measures is 1 by definition; ksg_mi
    // diagonals are excluded from the greedy path entirely.
    return rel / m - red / (m * m);
}

ScreeningResult mrmr_forward(const DataMatrix& data, const ColumnSelector& output_cols,
                             ScreenMeasure measure, std::size_t m) {
    ColumnSelector inputs = input_complement(data, output_cols);
    std::size_t p = inputs.size();
    if (m < 1 || m > p) throw BadMError("mrmr_forward requires 1 <= m <= p");
    MeasureContext ctx(data, output_cols, measure);

    std::vector<double> relevance(p, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(p); ++kk) {
        std::size_t k = static_cast<std::size_t>(kk);
        relevance[k] = ctx.against_output(inputs.indices[k]);
    }

    // Pairwise redundancy filled lazily, one column per greedy pick.
    Matrix redundancy(p, p, -1.0);
    std::vector<bool> picked(p, false);
    ScreeningResult result;
    result.marginal_scores = relevance;

    std::vector<std::size_t> chosen;
    for (std::size_t step = 0; step < m; ++step) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_k = p;
        for (std::size_t k = 0; k < p; ++k) {
            if (picked[k]) continue;
            double red = 0.0;
            for (std::size_t l : chosen) red += redundancy(k, l);
            double score =
                relevance[k] - (chosen.empty() ? 0.0 : red / static_cast<double>(chosen.size()));
            if (score > best) {
                best = score;
                best_k = k;
            }
        }
        picked[best_k] = true;
        chosen.push_back(best_k);
        result.selected.indices.push_back(inputs.indices[best_k]);
        result.scores.push_back(best);
        // Fill the redundancy column of the new member for later steps.
        if (chosen.size() < m) {
            std::vector<double> col(p, 0.0);
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(p); ++kk) {
                std::size_t k = static_cast<std::size_t>(kk);
                if (!picked[k])
                    col[k] = ctx.between_inputs(inputs.indices[k], inputs.indices[best_k]);
            }
            for (std::size_t k = 0; k < p; ++k) {
                redundancy(k, best_k) = col[k];
                redundancy(best_k, k) = col[k];
            }
        }
    }
    result.stop_reason = StopReason::max_size;
    return result;
}

namespace {

Matrix group_gram(const DataMatrix& data, const std::vector<std::size_t>& cols) {
    return gram(KernelSpec::gaussian(), data, ColumnSelector(cols)).entries;
}

}  // namespace

ScreeningResult iterative_hsic_screen(const DataMatrix& data, const ColumnSelector& output_cols,
                                      const ThresholdPolicy& policy, std::size_t max_size) {
    ColumnSelector inputs = input_complement(data, output_cols);
    std::size_t p = inputs.size();
    if (max_size == 0 || max_size > p) max_size = p;

    Matrix ky = gram(block_kind(data, output_cols) == ColumnKind::categorical
                         ? KernelSpec::categorical()
                         : KernelSpec::gaussian(),
                     data, output_cols)
                    .entries;

    // Step 1: marginal raw-HSIC screen against the threshold policy.
    std::vector<double> marginal(p, 0.0);
    std::vector<double> thresholds(p, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(p); ++kk) {
        std::size_t k = static_cast<std::size_t>(kk);
        Matrix kx = gram(KernelSpec::gaussian(), data,
                         ColumnSelector::single(inputs.indices[k]))
                        .entries;
        if (policy.kind == ThresholdPolicy::Kind::permutation_quantile) {
            PermutationNull null =
                permutation_null_hsic(kx, ky, false, policy.B, derive_stream(policy.seed, k),
                                      {1.0 - policy.level});
            marginal[k] = null.observed;
            thresholds[k] = null.quantiles.at(1.0 - policy.level);
        } else {
            marginal[k] = hsic_from_grams(kx, ky);
        }
    }

    std::vector<std::size_t> selected;  // positions into `inputs`
    if (policy.kind == ThresholdPolicy::Kind::permutation_quantile) {
        for (std::size_t k = 0; k < p; ++k)
            if (marginal[k] > thresholds[k]) selected.push_back(k);
    } else {
        std::size_t keep = static_cast<std::size_t>(
            std::ceil(policy.fraction * static_cast<double>(p)));
        keep = std::min(std::max<std::size_t>(keep, 1), p);
        std::vector<std::size_t> order(p);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return marginal[a] > marginal[b]; });
        selected.assign(order.begin(), order.begin() + keep);
    }
    // Keep selection order = decreasing marginal HSIC.
    std::stable_sort(selected.begin(), selected.end(),
                     [&](std::size_t a, std::size_t b) { return marginal[a] > marginal[b]; });

    ScreeningResult result;
    result.marginal_scores = marginal;
    if (selected.empty()) {
        result.stop_reason = StopReason::threshold;
        result.empty_selection = true;
        return result;
    }
    if (selected.size() > max_size) selected.resize(max_size);
    for (std::size_t k : selected) {
        result.selected.indices.push_back(inputs.indices[k]);
        result.scores.push_back(marginal[k]);
    }

    // Steps 2-3: augment with any input whose joint HSIC beats the current
    // group's, until stable or at capacity.
    std::set<std::size_t> in_set(selected.begin(), selected.end());
    while (result.selected.indices.size() < max_size) {
        double group_hsic = hsic_from_grams(group_gram(data, result.selected.indices), ky);
        std::vector<std::size_t> candidates;
        for (std::size_t k = 0; k < p; ++k)
            if (!in_set.count(k)) candidates.push_back(k);
        if (candidates.empty()) break;

        std::vector<double> joint(candidates.size(), 0.0);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t cc = 0; cc < static_cast<std::ptrdiff_t>(candidates.size()); ++cc) {
            std::size_t c = static_cast<std::size_t>(cc);
            std::vector<std::size_t> cols = result.selected.indices;
            cols.push_back(inputs.indices[candidates[c]]);
            joint[c] = hsic_from_grams(group_gram(data, cols), ky);
        }

        std::vector<std::size_t> adds;
        for (std::size_t c = 0; c < candidates.size(); ++c)
            if (joint[c] > group_hsic) adds.push_back(c);
        if (adds.empty()) {
            result.stop_reason = StopReason::stabilized;
            return result;
        }
        std::stable_sort(adds.begin(), adds.end(),
                         [&](std::size_t a, std::size_t b) { return joint[a] > joint[b]; });
        for (std::size_t c : adds) {
            if (result.selected.indices.size() >= max_size) break;
            in_set.insert(candidates[c]);
            result.selected.indices.push_back(inputs.indices[candidates[c]]);
            result.scores.push_back(joint[c]);
        }
    }
    result.stop_reason = result.selected.indices.size() >= max_size ? StopReason::max_size
                                                                    : StopReason::stabilized;
    return result;
}

HsicLassoSolution nonneg_lasso_cd(const Matrix& H, const std::vector<double>& h, double lambda,
                                  double yy) {
    std::size_t p = h.size();
    if (H.rows() != p || H.cols() != p)
        throw SizeMismatchError("nonneg_lasso_cd: H must be p x p");
    if (lambda < 0.0) throw Error("nonneg_lasso_cd requires lambda >= 0");

    HsicLassoSolution sol;
    sol.lambda = lambda;
    sol.alpha.assign(p, 0.0);
    sol.relevance = h;

    std::vector<double> s(p, 0.0);  // s_k = (H alpha)_k, kept incrementally
    const std::size_t max_sweeps = 10000;
    std::size_t sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
            double hkk = H(k, k);
            if (hkk <= 1e-15) continue;  // degenerate (constant-column) input
            double rest = s[k] - sol.alpha[k] * hkk;
            double candidate = (h[k] - rest - lambda) / hkk;
            double updated = candidate > 0.0 ? candidate : 0.0;
            double delta = updated - sol.alpha[k];
            if (delta != 0.0) {
                sol.alpha[k] = updated;
                for (std::size_t l = 0; l < p; ++l) s[l] += delta * H(l, k);
                max_change = std::max(max_change, std::fabs(delta));
            }
        }
        if (max_change <= 1e-8) {
            sol.converged = true;
            ++sweep;
            break;
        }
    }
    sol.iterations = sweep;

    double quad = 0.0, lin = 0.0, l1 = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
        quad += sol.alpha[k] * s[k];
        lin += sol.alpha[k] * h[k];
        l1 += sol.alpha[k];
    }
    sol.objective = 0.5 * yy - lin + 0.5 * quad + lambda * l1;
    return sol;
}

double nonneg_lasso_kkt(const Matrix& H, const std::vector<double>& h, double lambda,
                        const std::vector<double>& alpha) {
    std::size_t p = h.size();
    double worst = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
        if (H(k, k) <= 1e-15) continue;
        double grad = -h[k] + lambda;
        for (std::size_t l = 0; l < p; ++l) grad += H(k, l) * alpha[l];
        if (alpha[k] > 1e-12)
            worst = std::max(worst, std::fabs(grad));
        else
            worst = std::max(worst, std::max(0.0, -grad));
    }
    return worst;
}

namespace {

double frobenius_inner(const Matrix& a, const Matrix& b) {
    double nn = static_cast<double>(a.rows());
    return product_mean(a, b) * nn * nn;
}

}  // namespace

HsicLassoSolution hsic_lasso(const DataMatrix& data, const ColumnSelector& output_cols,
                             double lambda, const KernelSpec& kernel_x,
                             const KernelSpec& kernel_y) {
    ColumnSelector inputs = input_complement(data, output_cols);
    std::size_t p = inputs.size();

    // Centered Gram matrices, normalized to unit Frobenius norm so the
    // alpha magnitudes are comparable across inputs.
    auto normalized_gram = [&](const KernelSpec& spec, const ColumnSelector& sel) {
        Matrix g = gram(spec, data, sel).entries;
        double_center_inplace(g);
        double norm = std::sqrt(std::max(frobenius_inner(g, g), 0.0));
        if (norm > 0.0)
            for (std::size_t i = 0; i < g.rows(); ++i)
                for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) /= norm;
        return g;
    };

    KernelSpec y_spec = kernel_y;
    if (block_kind(data, output_cols) == ColumnKind::categorical)
        y_spec = KernelSpec::categorical();
    Matrix gy = normalized_gram(y_spec, output_cols);

    std::vector<Matrix> gx(p);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(p); ++kk) {
        std::size_t k = static_cast<std::size_t>(kk);
        gx[k] = normalized_gram(kernel_x, ColumnSelector::single(inputs.indices[k]));
    }

    Matrix H(p, p);
    std::vector<double> h(p, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(p); ++kk) {
        std::size_t k = static_cast<std::size_t>(kk);
        h[k] = frobenius_inner(gx[k], gy);
        for (std::size_t l = k; l < p; ++l) {
            double v = frobenius_inner(gx[k], gx[l]);
            H(k, l) = v;
            H(l, k) = v;
        }
    }

    if (lambda < 0.0) {
        double max_h = 0.0;
        for (double v : h) max_h = std::max(max_h, v);
        lambda = 0.1 * max_h;
    }
    return nonneg_lasso_cd(H, h, lambda, frobenius_inner(gy, gy));
}

ScreeningResult run_screening(const DataMatrix& data, const ColumnSelector& output_cols,
                              const ScreeningMethod& method) {
    switch (method.kind) {
        case ScreeningMethod::Kind::max_relevance: {
            ScreeningResult r = max_relevance_rank(data, output_cols, method.measure);
            std::size_t keep = std::min<std::size_t>(method.m, r.selected.indices.size());
            r.selected.indices.resize(keep);
            r.scores.resize(keep);
            return r;
        }
        case ScreeningMethod::Kind::mrmr:
            return mrmr_forward(data, output_cols, method.measure, method.m);
        case ScreeningMethod::Kind::iterative_hsic:
            return iterative_hsic_screen(data, output_cols, method.policy, method.max_size);
        case ScreeningMethod::Kind::hsic_lasso: {
            HsicLassoSolution sol = hsic_lasso(data, output_cols, method.lambda);
            ColumnSelector inputs = input_complement(data, output_cols);
            ScreeningResult r;
            r.marginal_scores = sol.relevance;
            for (std::size_t k = 0; k < sol.alpha.size(); ++k) {
                if (sol.alpha[k] > 1e-8) {
                    r.selected.indices.push_back(inputs.indices[k]);
                    r.scores.push_back(sol.alpha[k]);
                }
            }
            r.stop_reason = StopReason::threshold;
            return r;
        }
    }
    throw Error("unknown screening method");
}

std::vector<double> bootstrap_selection(const DataMatrix& data, const ColumnSelector& output_cols,
                                        const ScreeningMethod& method, std::size_t B,
                                        RngSeed seed) {
    if (B < 1) throw BadBError("bootstrap_selection requires B >= 1");
    ColumnSelector inputs = input_complement(data, output_cols);
    std::size_t n = data.n_rows();
    std::size_t p = inputs.size();
    std::vector<std::size_t> counts(p, 0);

    std::vector<std::vector<std::uint8_t>> masks(B, std::vector<std::uint8_t>(p, 0));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bb = 0; bb < static_cast<std::ptrdiff_t>(B); ++bb) {
        std::size_t b = static_cast<std::size_t>(bb);
        Rng rng = make_rng(seed, b);
        Matrix resampled(n, data.n_cols());
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t src = static_cast<std::size_t>(rng.next_below(n));
            for (std::size_t j = 0; j < data.n_cols(); ++j) resampled(i, j) = data(src, j);
        }
        DataMatrix boot(std::move(resampled), data.column_names(), data.column_kinds());
        ScreeningMethod local = method;
        local.policy.seed = derive_stream(seed, 100000 + b);
        ScreeningResult r = run_screening(boot, output_cols, local);
        for (std::size_t sel : r.selected.indices)
            for (std::size_t k = 0; k < p; ++k)
                if (inputs.indices[k] == sel) masks[b][k] = 1;
    }
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t k = 0; k < p; ++k) counts[k] += masks[b][k];

    std::vector<double> probs(p, 0.0);
    for (std::size_t k = 0; k < p; ++k)
        probs[k] = static_cast<double>(counts[k]) / static_cast<double>(B);
    return probs;
}

}  // namespace dmsens
