#include <cmath>

#include "seqpred/bench.hpp"
#include "seqpred/errors.hpp"

namespace seqpred {

namespace {

// two-sided 95% Student-t quantiles, t(0.975, df), df = 1..30
constexpr double kStudentT975[30] = {
    12.7062047364, 4.3026527300, 3.1824463053, 2.7764451052, 2.5705818366,
    2.4469118488,  2.3646242510, 2.3060041350, 2.2621571627, 2.2281388520,
    2.2009851601,  2.1788128297, 2.1603686565, 2.1447866879, 2.1314495456,
    2.1199052992,  2.1098155778, 2.1009220402, 2.0930240544, 2.0859634473,
    2.0796138447,  2.0738730679, 2.0686576104, 2.0638985616, 2.0595385528,
    2.0555294386,  2.0518305165, 2.0484071418, 2.0452296421, 2.0422724563,
};

constexpr double kNormal975 = 1.9599639845;

} // namespace

double ci_quantile(std::size_t n, CiMode mode) {
    if (n < 2) throw EvaluationError("confidence interval needs at least two scores");
    if (mode == CiMode::normal) return kNormal975;
    std::size_t df = n - 1;
    if (df <= 30) return kStudentT975[df - 1];
    return kNormal975; // close enough beyond 30 repetitions
}

std::pair<double, double> confidence_interval(const std::vector<double>& scores, CiMode mode) {
    const std::size_t n = scores.size();
    if (n < 2) throw EvaluationError("confidence interval needs at least two scores");
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(n);
    double variance = 0.0;
    for (double s : scores) variance += (s - mean) * (s - mean);
    variance /= static_cast<double>(n - 1); // sample variance
    double half_width = ci_quantile(n, mode) * std::sqrt(variance / static_cast<double>(n));
    return {mean, half_width};
}

} // namespace seqpred
