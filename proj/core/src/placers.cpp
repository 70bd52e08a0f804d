#include "otsp/placers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "otsp/tour_oracle.hpp"

namespace otsp {

namespace {

std::size_t integer_sqrt(std::size_t n) {
    if (n == 0) return 0;
    auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace

FmbState::FmbState(std::size_t n_, const MetricSpace& space, std::size_t level_)
    : n(n_), n1(integer_sqrt(n_)), quota((n_ + 1) / 2), level(level_),
      seen(space.size(), 0) {
    const std::size_t n2 = 2 * n1;
    blocks.resize(n2);
    const std::size_t base_len = n2 == 0 ? 0 : n / n2;
    const std::size_t extra = n2 == 0 ? 0 : n % n2;
    std::uint32_t cursor = 0;
    for (std::size_t b = 0; b < n2; ++b) {
        const std::size_t len = base_len + (b < extra ? 1 : 0);
        blocks[b].begin = cursor;
        blocks[b].next_free = cursor;
        cursor += std::uint32_t(len);
        blocks[b].end = cursor;
    }
}

std::size_t fmb_next(FmbState& st, const CellView& window, PointId x,
                     const MetricSpace& space) {
    if (st.placements >= st.quota)
        throw std::logic_error("fmb_next: quota of ceil(n/2) = " +
                               std::to_string(st.quota) + " placements exhausted");
    if (window.size() != st.n)
        throw std::invalid_argument("fmb_next: window size " +
                                    std::to_string(window.size()) +
                                    " does not match state n " + std::to_string(st.n));

    // The received set includes x from this moment on; the reset below
    // must already see it.
    const PointId canon = space.canonical(x);
    if (!st.seen[canon.value]) {
        st.seen[canon.value] = 1;
        st.received.push_back(canon);
    }

    increase_net(st.net, x, space);
    if (st.net.centers.size() > st.center_block.size())
        st.center_block.resize(st.net.centers.size(), -1);

    if (st.net.centers.size() > st.n1) {
        // Net overflow: restart it around x with a radius scaled to the
        // spanning-tree weight of everything received so far.
        for (auto& b : st.blocks) b.center = -1;
        const double mst = mst_weight(space, st.received);
        if (!st.resets.empty()) {
            // Each overflow needs n1 centers pairwise further than the
            // previous radius 4*mst'/n1 apart, which forces the new tree
            // to be at least twice as heavy. Anything else is a bug.
            const double prev = st.resets.back().mst;
            if (mst < 2 * prev * (1 - 1e-9))
                throw std::logic_error(
                    "fmb_next: reset tree weight " + std::to_string(mst) +
                    " failed to double the previous " + std::to_string(prev));
        }
        st.net.radius = 4 * mst / static_cast<double>(st.n1);
        st.net.centers.assign(1, x);
        st.center_block.assign(1, -1);
        st.block_scan_hint = 0;
        st.resets.push_back({st.level, st.placements, mst, st.net.radius});
    }

    const auto center = covering_center(st.net, x, space);
    if (!center)
        throw std::logic_error("fmb_next: no center covers the current point");

    std::int32_t block = st.center_block[*center];
    if (block >= 0 && st.blocks[std::size_t(block)].full()) {
        st.blocks[std::size_t(block)].center = -1;
        st.center_block[*center] = -1;
        block = -1;
    }
    if (block < 0) {
        // Lowest-index unassigned non-full block. Full blocks stay full
        // forever, so the scan hint only ever moves right.
        while (st.block_scan_hint < st.blocks.size() &&
               st.blocks[st.block_scan_hint].full())
            ++st.block_scan_hint;
        std::size_t b = st.block_scan_hint;
        while (b < st.blocks.size() &&
               (st.blocks[b].center >= 0 || st.blocks[b].full()))
            ++b;
        if (b == st.blocks.size())
            throw std::logic_error(
                "fmb_next: no unassigned non-full block available");
        block = std::int32_t(b);
        st.blocks[b].center = std::int32_t(*center);
        st.center_block[*center] = block;
    }

    auto& chosen = st.blocks[std::size_t(block)];
    const std::size_t index = chosen.next_free++;
    if (window.occupied(index))
        throw std::logic_error("fmb_next: chosen cell is already occupied");
    ++st.placements;
    return index;
}

void fill_most_blocks(std::size_t n, CellView window,
                      std::span<const PointId> stream,
                      const MetricSpace& space,
                      std::vector<ResetEvent>* resets, std::size_t level) {
    if (window.size() != n)
        throw std::invalid_argument("fill_most_blocks: window size mismatch");
    if (stream.size() != (n + 1) / 2)
        throw std::invalid_argument(
            "fill_most_blocks: stream length " + std::to_string(stream.size()) +
            " != ceil(n/2) = " + std::to_string((n + 1) / 2));
    if (n == 0) return;
    FmbState state(n, space, level);
    for (PointId x : stream)
        window.place(fmb_next(state, window, x, space), x);
    if (resets)
        resets->insert(resets->end(), state.resets.begin(), state.resets.end());
}

void recursively_fill_most_blocks(std::size_t n, CellView window,
                                  std::span<const PointId> stream,
                                  const MetricSpace& space,
                                  std::vector<ResetEvent>* resets,
                                  std::size_t level) {
    if (stream.size() != n)
        throw std::invalid_argument(
            "recursively_fill_most_blocks: stream length " +
            std::to_string(stream.size()) + " != n = " + std::to_string(n));
    if (n == 0) return;
    const std::size_t half = (n + 1) / 2;
    fill_most_blocks(n, window, stream.first(half), space, resets, level);
    CellView rest = window.empty_view();
    recursively_fill_most_blocks(n - half, rest, stream.subspan(half), space,
                                 resets, level + 1);
}

void leftmost_baseline(std::size_t n, CellView window,
                       std::span<const PointId> stream,
                       const MetricSpace& space) {
    (void)space;
    if (window.size() != n)
        throw std::invalid_argument("leftmost_baseline: window size mismatch");
    if (stream.size() != n)
        throw std::invalid_argument("leftmost_baseline: stream length " +
                                    std::to_string(stream.size()) +
                                    " != n = " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) window.place(i, stream[i]);
}

namespace {

// Iterative twin of recursively_fill_most_blocks: one half-placer level at
// a time, advancing to the empty-cell window when the level's quota is
// done. Placements match the recursive form exactly.
class RfmbPlacer final : public OnlinePlacer {
public:
    RfmbPlacer(std::size_t n, const MetricSpace& space)
        : space_(space), array_(n), window_(array_) {
        start_level();
    }

    std::size_t capacity() const override { return array_.size(); }

    std::size_t next(PointId x) override {
        if (done_ == array_.size())
            throw std::logic_error("next: all cells already placed");
        if (state_->placements == state_->quota) {
            window_ = window_.empty_view();
            ++level_;
            start_level();
        }
        const std::size_t local = fmb_next(*state_, window_, x, space_);
        const std::size_t base = window_.base_index(local);
        window_.place(local, x);
        ++done_;
        if (!state_->resets.empty() && state_->resets.size() > drained_) {
            resets_.insert(resets_.end(), state_->resets.begin() + drained_,
                           state_->resets.end());
            drained_ = state_->resets.size();
        }
        return base;
    }

    const PlacementArray& array() const override { return array_; }
    std::span<const ResetEvent> resets() const override { return resets_; }

private:
    void start_level() {
        state_.emplace(window_.size(), space_, level_);
        drained_ = 0;
    }

    const MetricSpace& space_;
    PlacementArray array_;
    CellView window_;
    std::optional<FmbState> state_;
    std::size_t level_ = 0;
    std::size_t done_ = 0;
    std::size_t drained_ = 0;
    std::vector<ResetEvent> resets_;
};

// The half placer behind the OnlinePlacer interface: accepts ceil(n/2)
// points into an n-cell array and stops there.
class FmbHalfPlacer final : public OnlinePlacer {
public:
    FmbHalfPlacer(std::size_t n, const MetricSpace& space)
        : space_(space), array_(n), window_(array_), state_(n, space) {}

    std::size_t capacity() const override { return state_.quota; }

    std::size_t next(PointId x) override {
        const std::size_t local = fmb_next(state_, window_, x, space_);
        window_.place(local, x);
        return local;  // identity window: local == base
    }

    const PlacementArray& array() const override { return array_; }
    std::span<const ResetEvent> resets() const override { return state_.resets; }

private:
    const MetricSpace& space_;
    PlacementArray array_;
    CellView window_;
    FmbState state_;
};

class LeftmostPlacer final : public OnlinePlacer {
public:
    LeftmostPlacer(std::size_t n, const MetricSpace&) : array_(n) {}

    std::size_t capacity() const override { return array_.size(); }

    std::size_t next(PointId x) override {
        array_.place(cursor_, x);
        return cursor_++;
    }

    const PlacementArray& array() const override { return array_; }

private:
    PlacementArray array_;
    std::size_t cursor_ = 0;
};

}  // namespace

std::unique_ptr<OnlinePlacer> make_placer(std::string_view name, std::size_t n,
                                          const MetricSpace& space) {
    if (name == "rfmb") return std::make_unique<RfmbPlacer>(n, space);
    if (name == "fmb-half") return std::make_unique<FmbHalfPlacer>(n, space);
    if (name == "leftmost") return std::make_unique<LeftmostPlacer>(n, space);
    throw std::invalid_argument("unknown placer \"" + std::string(name) +
                                "\" (known: rfmb, fmb-half, leftmost)");
}

const std::vector<std::string_view>& placer_names() {
    static const std::vector<std::string_view> names{"rfmb", "fmb-half",
                                                     "leftmost"};
    return names;
}

}  // namespace otsp
