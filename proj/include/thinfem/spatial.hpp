#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "thinfem/geometry.hpp"

namespace thinfem {

struct Box2 {
    Point2 lo{};
    Point2 hi{};

    bool overlaps(const Box2& o) const {
        return lo[0] <= o.hi[0] && o.lo[0] <= hi[0] && lo[1] <= o.hi[1] && o.lo[1] <= hi[1];
    }
};

template <typename Range>
Box2 bounding_box(const Range& points, double pad = 0.0) {
    Box2 b{{{INFINITY, INFINITY}}, {{-INFINITY, -INFINITY}}};
    for (const auto& p : points) {
        for (int d = 0; d < 2; ++d) {
            b.lo[d] = std::min(b.lo[d], p[d]);
            b.hi[d] = std::max(b.hi[d], p[d]);
        }
    }
    for (int d = 0; d < 2; ++d) {
        b.lo[d] -= pad;
        b.hi[d] += pad;
    }
    return b;
}

/// Calls fn(i, j), i < j, once for every pair of overlapping boxes. Uses a
/// uniform bucket grid sized to the mean box extent; each pair is reported
/// from the single bucket holding the low corner of the boxes' overlap.
template <typename Fn>
void for_each_overlapping_pair(const std::vector<Box2>& boxes, Fn&& fn) {
    const std::size_t n = boxes.size();
    if (n < 2) return;
    Box2 all = boxes.front();
    double extent = 0.0;
    for (const auto& b : boxes) {
        for (int d = 0; d < 2; ++d) {
            all.lo[d] = std::min(all.lo[d], b.lo[d]);
            all.hi[d] = std::max(all.hi[d], b.hi[d]);
        }
        extent += std::max(b.hi[0] - b.lo[0], b.hi[1] - b.lo[1]);
    }
    extent /= static_cast<double>(n);
    const double span = std::max(all.hi[0] - all.lo[0], all.hi[1] - all.lo[1]);
    if (!(extent > 0.0)) extent = span > 0.0 ? span : 1.0;
    // keep the grid at most ~4n buckets per axis squared
    const double max_cells = std::max(1.0, std::ceil(2.0 * std::sqrt(static_cast<double>(n))));
    const double cell = std::max(extent, span / max_cells);

    auto index = [&](double v, int d) {
        return static_cast<std::int64_t>(std::floor((v - all.lo[d]) / cell));
    };
    auto key = [](std::int64_t ix, std::int64_t iy) { return (ix << 32) ^ (iy & 0xffffffff); };

    std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = boxes[i];
        for (auto ix = index(b.lo[0], 0); ix <= index(b.hi[0], 0); ++ix) {
            for (auto iy = index(b.lo[1], 1); iy <= index(b.hi[1], 1); ++iy) buckets[key(ix, iy)].push_back(i);
        }
    }
    std::vector<std::int64_t> keys;
    keys.reserve(buckets.size());
    for (const auto& kv : buckets) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());

    for (auto k : keys) {
        const auto& members = buckets[k];
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                std::size_t i = members[a], j = members[b];
                if (!boxes[i].overlaps(boxes[j])) continue;
                const double ox = std::max(boxes[i].lo[0], boxes[j].lo[0]);
                const double oy = std::max(boxes[i].lo[1], boxes[j].lo[1]);
                if (key(index(ox, 0), index(oy, 1)) != k) continue;
                if (i > j) std::swap(i, j);
                fn(i, j);
            }
        }
    }
}

}  // namespace thinfem
