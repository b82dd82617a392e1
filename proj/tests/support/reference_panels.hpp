#pragma once

// The ten 4x4 gridworld panels: exponents of beta per cell (-1 marks a 0
// entry) and the arrow in every cell. Row 0 is the top row.

#include <array>
#include <string>

namespace testing_support {

using Exponents = std::array<std::array<int, 4>, 4>;
using Arrows = std::array<std::array<const char*, 4>, 4>;

struct Panel {
    Exponents values;
    Arrows arrows;
};

inline constexpr Exponents kE0{{{0, -1, -1, -1}, {-1, -1, -1, -1}, {-1, -1, -1, -1}, {-1, -1, -1, -1}}};
inline constexpr Exponents kCol1{{{0, -1, -1, -1}, {1, -1, -1, -1}, {-1, -1, -1, -1}, {-1, -1, -1, -1}}};
inline constexpr Exponents kCol2{{{0, -1, -1, -1}, {1, -1, -1, -1}, {2, -1, -1, -1}, {-1, -1, -1, -1}}};
inline constexpr Exponents kCol3{{{0, -1, -1, -1}, {1, -1, -1, -1}, {2, -1, -1, -1}, {3, -1, -1, -1}}};

inline constexpr Arrows kAllUp{{{"up", "up", "up", "up"},
                                {"up", "up", "up", "up"},
                                {"up", "up", "up", "up"},
                                {"up", "up", "up", "up"}}};
inline constexpr Arrows kSecondColumnLeft{{{"up", "left", "up", "up"},
                                           {"up", "left", "up", "up"},
                                           {"up", "left", "up", "up"},
                                           {"up", "left", "up", "up"}}};

/// Top row: value improvement three times, then one policy improvement.
inline const std::array<Panel, 5> kPolicyIterationRow{{
    {kE0, kAllUp},
    {kCol1, kAllUp},
    {kCol2, kAllUp},
    {kCol3, kAllUp},
    {kCol3, kSecondColumnLeft},
}};

inline Arrows top_row_left(int from_col) {
    Arrows a = kAllUp;
    for (int c = from_col; c >= 1; --c) a[0][static_cast<std::size_t>(c)] = "left";
    return a;
}

/// Bottom row: both improvements at every step.
inline const std::array<Panel, 5> kValueIterationRow{{
    {kE0, kAllUp},
    {{{{0, 1, -1, -1}, {1, -1, -1, -1}, {-1, -1, -1, -1}, {-1, -1, -1, -1}}}, top_row_left(1)},
    {{{{0, 1, 2, -1}, {1, 2, -1, -1}, {2, -1, -1, -1}, {-1, -1, -1, -1}}}, top_row_left(2)},
    {{{{0, 1, 2, 3}, {1, 2, 3, -1}, {2, 3, -1, -1}, {3, -1, -1, -1}}}, top_row_left(3)},
    {{{{0, 1, 2, 3}, {1, 2, 3, 4}, {2, 3, 4, -1}, {3, 4, -1, -1}}}, top_row_left(3)},
}};

}  // namespace testing_support
