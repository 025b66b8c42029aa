#include "adpipe/backends.hpp"

#include <algorithm>
#include <cmath>

namespace adpipe {

namespace {

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw InvalidArgument("cosine_similarity requires equal-length non-empty vectors");
    }
    constexpr double kTol = 1e-6;
    if (std::abs(norm(a) - 1.0) > kTol || std::abs(norm(b) - 1.0) > kTol) {
        throw NormViolation("cosine_similarity inputs must be unit vectors");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
    }
    return std::clamp(dot, -1.0, 1.0);
}

void normalize_unit(std::vector<double>& v) {
    const double n = norm(v);
    if (n == 0.0) {
        throw InvalidArgument("cannot normalize the zero vector");
    }
    for (double& x : v) x /= n;
}

void sort_candidates(std::vector<DetectionCandidate>& candidates) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const DetectionCandidate& a, const DetectionCandidate& b) {
                         if (a.confidence != b.confidence) return a.confidence > b.confidence;
                         if (a.box.area() != b.box.area()) return a.box.area() < b.box.area();
                         return a.box.x_min < b.box.x_min;
                     });
}

}  // namespace adpipe
