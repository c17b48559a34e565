//! Non-Serre defining relations of el(5;5), one list per registry matrix.
//! Coefficients are kept exactly as printed.

pub(super) const LISTED_RELATIONS: [&[&str]; 7] = [
    &[
        "[x4,[x3,x5]] - [x5,[x3,x4]]",
        "[[x1,x3],[x3,x4]]",
        "[[x1,x3],[x3,x5]]",
        "[[x2,x5],[x3,x5]]",
        "[[x4,x5],[[x2,x5],[x4,x5]]]",
    ],
    &[
        "[[x1,x3],[x3,x4]]",
        "[[x1,x3],[x3,x5]]",
        "[[[x3,x4],[x3,x5]],[[x3,[x2,x5]],[[x3,x4],[x3,x5]]]]",
    ],
    &[
        "[[x3,x4],[[x2,x5],[x4,x5]]] - 4[[x4,[x2,x5]],[x5,[x3,x4]]]",
        "[[x4,[x1,x3]],[[x3,x4],[x4,x5]]]",
    ],
    &[
        "[x4,[x2,x5]] - 3[x5,[x2,x4]]",
        "[[x2,x5],[x3,x5]]",
        "[[x5,[x1,x3]],[[x3,x5],[x4,x5]]]",
    ],
    &["[[[x4,[x1,x3]],[x5,[x1,x3]]],[[[x1,x3],[x2,x5]],[[x4,[x1,x3]],[x5,[x1,x3]]]]]"],
    &[
        "[[x2,x4],[[x2,x4],[x2,x5]]]",
        "[[[x1,x3],[x2,x5]],[[x3,[x2,x5]],[[x2,x4],[x2,x5]]]]",
    ],
    &[
        "[x2,[x2,[x2,x5]]]",
        "[[[x2,x4],[x5,[x1,x3]]],[[x5,[x2,x4]],[x3,[x2,[x2,x5]]]]] \
         - 2[[[x2,x4],[[x1,x3],[x2,x5]]],[[x3,[x2,x5]],[x5,[x2,x4]]]]",
    ],
];
