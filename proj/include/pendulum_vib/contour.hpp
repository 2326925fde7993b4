// Marching-squares level-set extraction on a rectangular scalar grid
#pragma once

#include <pendulum_vib/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace pendulum_vib {

/// Point in grid-index coordinates: x along the first index, y along the
/// second.
struct GridPoint {
    double x = 0.0;
    double y = 0.0;
};

struct Polyline {
    std::vector<GridPoint> points;
    bool closed = false;
};

/// One level-crossing segment inside cell (i, j).
struct CellSegment {
    std::size_t i = 0;
    std::size_t j = 0;
    GridPoint a;
    GridPoint b;
    std::uint64_t key_a = 0;
    std::uint64_t key_b = 0;
    bool ambiguous = false;
};

/// Read-only view of an nx × ny scalar field stored row-major as
/// values[i * ny + j].
struct ScalarField {
    std::span<const double> values;
    std::size_t nx = 0;
    std::size_t ny = 0;

    double operator()(std::size_t i, std::size_t j) const noexcept {
        return values[i * ny + j];
    }
};

namespace detail {

// Crossing points are identified by the grid element they sit on so that
// neighbouring cells produce bit-identical shared endpoints.
enum class KeyKind : std::uint64_t { Corner = 0, EdgeX = 1, EdgeY = 2 };

inline std::uint64_t point_key(KeyKind kind, std::size_t i, std::size_t j,
                               std::size_t ny) noexcept {
    return (static_cast<std::uint64_t>(i) * ny + j) * 3 + static_cast<std::uint64_t>(kind);
}

/// Snap distance, in grid units, below which a crossing is merged with the
/// grid corner it lies on.
inline constexpr double kEndpointTol = 1e-9;

struct Crossing {
    GridPoint p;
    std::uint64_t key;
};

/// Crossing on the edge from corner (i0, j0) to corner (i1, j1), where exactly
/// one index differs by one.
inline Crossing edge_crossing(const ScalarField &f, double level, std::size_t i0,
                              std::size_t j0, std::size_t i1, std::size_t j1) {
    const double v0 = f(i0, j0);
    const double v1 = f(i1, j1);
    double t = (level - v0) / (v1 - v0);
    t = std::clamp(t, 0.0, 1.0);
    if (t <= kEndpointTol) {
        return {{static_cast<double>(i0), static_cast<double>(j0)},
                point_key(KeyKind::Corner, i0, j0, f.ny)};
    }
    if (t >= 1.0 - kEndpointTol) {
        return {{static_cast<double>(i1), static_cast<double>(j1)},
                point_key(KeyKind::Corner, i1, j1, f.ny)};
    }
    const GridPoint p{static_cast<double>(i0) + t * static_cast<double>(i1 - i0),
                      static_cast<double>(j0) + t * static_cast<double>(j1 - j0)};
    const std::size_t ilo = std::min(i0, i1);
    const std::size_t jlo = std::min(j0, j1);
    const KeyKind kind = (i0 != i1) ? KeyKind::EdgeX : KeyKind::EdgeY;
    return {p, point_key(kind, ilo, jlo, f.ny)};
}

} // namespace detail

/// All level crossings, cell by cell. Corners with value > level are inside.
/// Saddle cells (diagonal corners inside) are resolved by comparing the
/// average of the four corners with the level.
inline std::vector<CellSegment> cell_segments(const ScalarField &f, double level) {
    if (f.values.size() != f.nx * f.ny) {
        throw ParameterError("cell_segments: field size does not match nx * ny");
    }
    std::vector<CellSegment> out;
    if (f.nx < 2 || f.ny < 2) {
        return out;
    }
    for (std::size_t i = 0; i + 1 < f.nx; ++i) {
        for (std::size_t j = 0; j + 1 < f.ny; ++j) {
            // corners: c0 (i,j), c1 (i+1,j), c2 (i+1,j+1), c3 (i,j+1)
            const double v0 = f(i, j);
            const double v1 = f(i + 1, j);
            const double v2 = f(i + 1, j + 1);
            const double v3 = f(i, j + 1);
            const unsigned idx = (v0 > level ? 1u : 0u) | (v1 > level ? 2u : 0u) |
                                 (v2 > level ? 4u : 0u) | (v3 > level ? 8u : 0u);
            if (idx == 0 || idx == 15) {
                continue;
            }
            // edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left (c0-c3)
            auto edge = [&](int e) {
                switch (e) {
                case 0:
                    return detail::edge_crossing(f, level, i, j, i + 1, j);
                case 1:
                    return detail::edge_crossing(f, level, i + 1, j, i + 1, j + 1);
                case 2:
                    return detail::edge_crossing(f, level, i, j + 1, i + 1, j + 1);
                default:
                    return detail::edge_crossing(f, level, i, j, i, j + 1);
                }
            };
            auto emit = [&](int ea, int eb, bool ambiguous) {
                const auto a = edge(ea);
                const auto b = edge(eb);
                if (a.key == b.key) {
                    return;
                }
                out.push_back({i, j, a.p, b.p, a.key, b.key, ambiguous});
            };
            const bool center_inside = 0.25 * (v0 + v1 + v2 + v3) > level;
            switch (idx) {
            case 1:
            case 14:
                emit(3, 0, false);
                break;
            case 2:
            case 13:
                emit(0, 1, false);
                break;
            case 3:
            case 12:
                emit(3, 1, false);
                break;
            case 4:
            case 11:
                emit(1, 2, false);
                break;
            case 6:
            case 9:
                emit(0, 2, false);
                break;
            case 7:
            case 8:
                emit(3, 2, false);
                break;
            case 5: // c0, c2 inside
                if (center_inside) {
                    emit(0, 1, true);
                    emit(2, 3, true);
                } else {
                    emit(3, 0, true);
                    emit(1, 2, true);
                }
                break;
            case 10: // c1, c3 inside
                if (center_inside) {
                    emit(3, 0, true);
                    emit(1, 2, true);
                } else {
                    emit(0, 1, true);
                    emit(2, 3, true);
                }
                break;
            default:
                break;
            }
        }
    }
    return out;
}

/// Chain cell segments into polylines. Open chains start from endpoints of
/// odd degree; what remains forms closed loops.
inline std::vector<Polyline> chain_segments(const std::vector<CellSegment> &segs) {
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> incident;
    incident.reserve(segs.size() * 2);
    for (std::size_t s = 0; s < segs.size(); ++s) {
        incident[segs[s].key_a].push_back(s);
        incident[segs[s].key_b].push_back(s);
    }
    std::vector<bool> used(segs.size(), false);

    auto walk = [&](std::uint64_t start_key, const GridPoint &start_point) {
        Polyline line;
        line.points.push_back(start_point);
        std::uint64_t key = start_key;
        for (;;) {
            std::size_t next = segs.size();
            for (std::size_t s : incident[key]) {
                if (!used[s]) {
                    next = s;
                    break;
                }
            }
            if (next == segs.size()) {
                break;
            }
            used[next] = true;
            const auto &seg = segs[next];
            if (seg.key_a == key) {
                line.points.push_back(seg.b);
                key = seg.key_b;
            } else {
                line.points.push_back(seg.a);
                key = seg.key_a;
            }
        }
        line.closed = line.points.size() > 2 && key == start_key;
        return line;
    };

    std::vector<Polyline> out;
    // Deterministic order: scan segments in generation order.
    for (std::size_t s = 0; s < segs.size(); ++s) {
        for (const auto &[key, point] :
             {std::pair{segs[s].key_a, segs[s].a}, std::pair{segs[s].key_b, segs[s].b}}) {
            const auto &inc = incident[key];
            if (inc.size() % 2 == 1 &&
                std::any_of(inc.begin(), inc.end(), [&](std::size_t k) { return !used[k]; })) {
                out.push_back(walk(key, point));
            }
        }
    }
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (!used[s]) {
            out.push_back(walk(segs[s].key_a, segs[s].a));
        }
    }
    return out;
}

inline std::vector<Polyline> marching_squares(const ScalarField &f, double level) {
    return chain_segments(cell_segments(f, level));
}

} // namespace pendulum_vib
