#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "adpipe/compositing.hpp"
#include "adpipe/types.hpp"

namespace testsupport {

/// Independent oracle for the seamless-clone system: assembles the dense
/// linear system (4u_p - sum of interior neighbors = boundary values +
/// guidance divergence) and solves it by Gaussian elimination with partial
/// pivoting. Shares only the system definition with the implementation, not
/// the solver.
inline std::vector<double> gaussian_solve(std::vector<std::vector<double>> a,
                                          std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        if (std::abs(a[pivot][col]) < 1e-12) {
            throw std::runtime_error("singular system in oracle");
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t k = i + 1; k < n; ++k) sum -= a[i][k] * x[k];
        x[i] = sum / a[i][i];
    }
    return x;
}

inline std::array<std::vector<double>, 3> dense_poisson_oracle(
    const adpipe::SceneImage& scene, const adpipe::CutoutObject& cutout,
    const adpipe::PlacementBox& box) {
    const int ox = static_cast<int>(std::floor(box.x_min + 0.5));
    const int oy = static_cast<int>(std::floor(box.y_min + 0.5));
    const int w = cutout.width;
    const int h = cutout.height;
    const int iw = w - 2, ih = h - 2;
    const std::size_t n = static_cast<std::size_t>(iw) * ih;

    const auto scene_at = [&](int rx, int ry, int c) -> double {
        const adpipe::Rgb p = scene.at(ox + rx, oy + ry);
        return c == 0 ? p.r : (c == 1 ? p.g : p.b);
    };
    const auto cut_at = [&](int rx, int ry, int c) -> double {
        const std::size_t i = (static_cast<std::size_t>(ry) * w + rx) * 3 + c;
        return cutout.rgb[i];
    };
    const auto matte_at = [&](int rx, int ry) {
        return cutout.alpha[static_cast<std::size_t>(ry) * w + rx];
    };
    const auto guidance = [&](int rx, int ry, int nx, int ny, int c) {
        const double m = 0.5 * (matte_at(rx, ry) + matte_at(nx, ny));
        return m * (cut_at(rx, ry, c) - cut_at(nx, ny, c)) +
               (1.0 - m) * (scene_at(rx, ry, c) - scene_at(nx, ny, c));
    };
    const auto index = [&](int rx, int ry) {
        return static_cast<std::size_t>(ry - 1) * iw + (rx - 1);
    };

    std::array<std::vector<double>, 3> planes;
    const int dxs[4] = {1, -1, 0, 0};
    const int dys[4] = {0, 0, 1, -1};
    for (int c = 0; c < 3; ++c) {
        std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
        std::vector<double> b(n, 0.0);
        for (int ry = 1; ry < h - 1; ++ry) {
            for (int rx = 1; rx < w - 1; ++rx) {
                const std::size_t row = index(rx, ry);
                a[row][row] = 4.0;
                for (int k = 0; k < 4; ++k) {
                    const int nx = rx + dxs[k];
                    const int ny = ry + dys[k];
                    b[row] += guidance(rx, ry, nx, ny, c);
                    const bool interior = nx >= 1 && nx < w - 1 && ny >= 1 && ny < h - 1;
                    if (interior) {
                        a[row][index(nx, ny)] = -1.0;
                    } else {
                        b[row] += scene_at(nx, ny, c);  // Dirichlet boundary
                    }
                }
            }
        }
        planes[c] = gaussian_solve(std::move(a), std::move(b));
    }
    return planes;
}

}  // namespace testsupport
