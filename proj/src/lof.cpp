#include "literal_forge/lof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lforge {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double density_ratio(double neighbor_lrd, double own_lrd) {
    if (std::isinf(own_lrd)) return std::isinf(neighbor_lrd) ? 1.0 : 0.0;
    return neighbor_lrd / own_lrd;
}

}  // namespace

std::vector<double> lof_raw_scores(std::span<const double> values, std::size_t k) {
    const std::size_t n = values.size();
    if (k == 0 || n <= k) throw std::invalid_argument("lof requires more than k values and k >= 1");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = values[order[i]];

    // In one dimension the tie-inclusive k-neighborhood of a point is a
    // contiguous run of the sorted order, [lo, hi] minus the point itself.
    std::vector<double> kdist(n);
    std::vector<std::size_t> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t l = i, r = i;  // taken range is (l, r) exclusive of i's bounds
        double d = 0.0;
        for (std::size_t taken = 0; taken < k; ++taken) {
            bool has_left = l > 0, has_right = r + 1 < n;
            double dl = has_left ? x[i] - x[l - 1] : kInf;
            double dr = has_right ? x[r + 1] - x[i] : kInf;
            if (dl <= dr) {
                --l;
                d = dl;
            } else {
                ++r;
                d = dr;
            }
        }
        while (l > 0 && x[i] - x[l - 1] <= d) --l;
        while (r + 1 < n && x[r + 1] - x[i] <= d) ++r;
        kdist[i] = d;
        lo[i] = l;
        hi[i] = r;
    }

    std::vector<double> lrd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t o = lo[i]; o <= hi[i]; ++o) {
            if (o == i) continue;
            sum += std::max(kdist[o], std::abs(x[i] - x[o]));
        }
        double count = static_cast<double>(hi[i] - lo[i]);
        lrd[i] = sum == 0.0 ? kInf : count / sum;
    }

    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t o = lo[i]; o <= hi[i]; ++o) {
            if (o == i) continue;
            sum += density_ratio(lrd[o], lrd[i]);
        }
        scores[order[i]] = sum / static_cast<double>(hi[i] - lo[i]);
    }
    return scores;
}

LofResult lof_scores(std::span<const double> values, std::size_t k, double threshold) {
    LofResult result;
    if (k == 0 || values.size() <= k) {
        result.skipped = true;
        result.warning = "LOF skipped: " + std::to_string(values.size()) + " values <= k=" + std::to_string(k);
        result.retained.resize(values.size());
        std::iota(result.retained.begin(), result.retained.end(), 0);
        return result;
    }
    result.scores = lof_raw_scores(values, k);
    for (std::size_t i = 0; i < values.size(); ++i)
        (result.scores[i] > threshold ? result.outliers : result.retained).push_back(i);
    return result;
}

}  // namespace lforge
