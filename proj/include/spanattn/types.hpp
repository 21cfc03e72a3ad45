#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace spanattn {

// All numerics are 32-bit floats, row-major storage.
using Scalar = float;
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RowVec = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

// Read-only views that also bind to column slices of a wider row-major
// matrix (per-head slices of a packed KV-cache).
using MatView = Eigen::Ref<const Mat, 0, Eigen::OuterStride<>>;
using VecView = Eigen::Ref<const Vec>;

using Index = Eigen::Index;

// Additive mask value that prohibits attention. The most negative finite
// float rather than -inf: a max-shift of two prohibited scores stays finite.
inline constexpr Scalar kProhibit = std::numeric_limits<Scalar>::lowest();

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EmptySpanError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SpanRangeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct AllProhibitedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DuplicateAnchorError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct UnknownAnchorError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct MissingPrevLineError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InfeasibleMaskError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ScheduleError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct TokenizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EmptyBinError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Counters for key/value rows touched by a decode-attention call. The
// desk-scale proxy for memory-bandwidth savings.
struct ReadStats {
    std::int64_t key_rows_read = 0;
    std::int64_t value_rows_read = 0;
    std::int64_t blocks_visited = 0;
    std::int64_t blocks_skipped = 0;

    ReadStats& operator+=(const ReadStats& other) {
        key_rows_read += other.key_rows_read;
        value_rows_read += other.value_rows_read;
        blocks_visited += other.blocks_visited;
        blocks_skipped += other.blocks_skipped;
        return *this;
    }
};

inline bool operator==(const ReadStats& a, const ReadStats& b) {
    return a.key_rows_read == b.key_rows_read && a.value_rows_read == b.value_rows_read &&
           a.blocks_visited == b.blocks_visited && a.blocks_skipped == b.blocks_skipped;
}

}  // namespace spanattn
