/// Columns b_1 .. b_24 of the reference 4-cycle B matrix, states in table order.
pub const FOUR_CYCLE_B: [[i64; 16]; 24] = [
    [0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1, 0],
    [1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 1],
    [0, 1, 1, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 1, 1, 0],
    [0, 1, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1],
    [0, 0, 0, 1, 1, 1, 0, 1, 1, 0, 1, 1, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1],
    [1, 0, 0, 0, 1, 0, 1, 1, 1, 1, 0, 1, 0, 0, 0, 1],
    [1, 1, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 0, 1, 1],
    [0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1],
    [0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 1, 1],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0, 1, 0],
    [1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 1],
    [0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0],
];

/// Reference expansion table of F_j = 1 - b_j, times 16: rows I, D, C, B, A, BA, CB, DC, DA; columns F_1 .. F_24.
pub const FOUR_CYCLE_F_TIMES_16: [[i64; 24]; 9] = [
    [
        12, 12, 12, 12, 12, 12, 12, 8, 12, 8, 12, 12, 12, 8, 12, 8, 8, 12, 12, 8, 12, 8, 8, 12,
    ],
    [
        -4, -4, 0, -4, 4, 0, 0, 0, 4, 0, -4, 0, 0, 0, 4, 0, 0, 0, 0, 0, 4, 0, 0, 0,
    ],
    [
        4, -4, -4, 0, 0, 0, 4, 0, 0, 0, 0, 0, 4, 0, 4, 0, 0, 0, -4, 0, -4, 0, 0, 0,
    ],
    [
        0, 0, -4, 0, 0, -4, -4, 0, 0, 0, 0, -4, 4, 0, 0, 0, 0, 4, 4, 0, 0, 0, 0, 4,
    ],
    [
        0, 0, 0, -4, -4, -4, 0, 0, 4, 0, 4, 4, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, -4,
    ],
    [
        0, 0, 0, 0, 0, -4, 0, 4, 0, 4, 0, 4, 0, -4, 0, -4, -4, -4, 0, 4, 0, 4, -4, 4,
    ],
    [
        0, 0, -4, 0, 0, 0, 4, 4, 0, 4, 0, 0, -4, 4, 0, -4, -4, 0, 4, -4, 0, -4, 4, 0,
    ],
    [
        4, -4, 0, 0, 0, 0, 0, 4, 0, -4, 0, 0, 0, 4, -4, 4, -4, 0, 0, -4, 4, 4, -4, 0,
    ],
    [
        0, 0, 0, -4, 4, 0, 0, -4, -4, 4, 4, 0, 0, 4, 0, -4, 4, 0, 0, -4, 0, 4, -4, 0,
    ],
];
