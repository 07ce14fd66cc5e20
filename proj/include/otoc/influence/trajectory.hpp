#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace otoc::influence {

/// Piecewise-constant n_z trajectory: contiguous segments covering [0, T]
/// with values in [-1, 1].
struct Segment {
    double t0 = 0.0;
    double t1 = 0.0;
    double value = 0.0;
};

class PiecewiseTrajectory {
public:
    explicit PiecewiseTrajectory(std::vector<Segment> segments)
        : segs_(std::move(segments)) {
        if (segs_.empty()) throw std::invalid_argument("trajectory: needs at least one segment");
        if (std::abs(segs_.front().t0) > 1e-12) {
            throw std::invalid_argument("trajectory: must start at t = 0");
        }
        for (std::size_t i = 0; i < segs_.size(); ++i) {
            if (segs_[i].t1 < segs_[i].t0) {
                throw std::invalid_argument("trajectory: segments must have non-negative length");
            }
            if (std::abs(segs_[i].value) > 1.0 + 1e-12) {
                throw std::invalid_argument("trajectory: |n_z| must be <= 1");
            }
            if (i > 0 && std::abs(segs_[i].t0 - segs_[i - 1].t1) > 1e-12) {
                throw std::invalid_argument("trajectory: segments must be contiguous");
            }
        }
    }

    static PiecewiseTrajectory constant(double value, double duration) {
        return PiecewiseTrajectory({Segment{0.0, duration, value}});
    }

    const std::vector<Segment>& segments() const { return segs_; }
    double span() const { return segs_.back().t1; }

    double value_at(double t) const {
        for (const Segment& s : segs_) {
            if (t >= s.t0 - 1e-12 && t <= s.t1 + 1e-12) return s.value;
        }
        throw std::invalid_argument("trajectory: time outside span");
    }

    PiecewiseTrajectory scaled(double factor) const {
        std::vector<Segment> out = segs_;
        for (Segment& s : out) s.value *= factor;
        return PiecewiseTrajectory(std::move(out));
    }

    /// Appends `next` after this trajectory (its clock is shifted by span()).
    PiecewiseTrajectory then(const PiecewiseTrajectory& next) const {
        std::vector<Segment> out = segs_;
        const double off = span();
        for (Segment s : next.segments()) {
            s.t0 += off;
            s.t1 += off;
            out.push_back(s);
        }
        return PiecewiseTrajectory(std::move(out));
    }

private:
    std::vector<Segment> segs_;
};

/// The four path-integral branches entering an influence phase. For the
/// full-reversal scheme all branches span [0, t]; for the partial-reversal
/// scheme branches 1-3 span [0, t] and branch 4 spans [0, 3t].
struct PathConfiguration {
    std::array<PiecewiseTrajectory, 4> branches;

    static PathConfiguration constant_fbte(const std::array<double, 4>& values, double t) {
        return PathConfiguration{{PiecewiseTrajectory::constant(values[0], t),
                                  PiecewiseTrajectory::constant(values[1], t),
                                  PiecewiseTrajectory::constant(values[2], t),
                                  PiecewiseTrajectory::constant(values[3], t)}};
    }

    static PathConfiguration constant_pbte(const std::array<double, 4>& values, double t) {
        return PathConfiguration{{PiecewiseTrajectory::constant(values[0], t),
                                  PiecewiseTrajectory::constant(values[1], t),
                                  PiecewiseTrajectory::constant(values[2], t),
                                  PiecewiseTrajectory::constant(values[3], 3.0 * t)}};
    }
};

} // namespace otoc::influence
