//! The published dual point for `k = 10`: `θ` and the nonzero `β`, `λ`, `ρ`
//! entries as decimal literals (every `γ` is zero). Pages are 1-based.

pub const THETA: &str = "0.612275";

pub const BETA: &[(usize, usize, &str)] = &[
    (1, 2, "1"),
    (1, 3, "1"),
    (1, 4, "0.13026"),
    (2, 3, "1"),
    (2, 4, "1"),
    (2, 5, "1"),
    (2, 6, "0.0608937"),
    (3, 4, "1"),
    (3, 5, "1"),
    (3, 6, "1"),
    (3, 7, "0.667024"),
    (4, 5, "1"),
    (4, 6, "1"),
    (4, 7, "0.946275"),
    (4, 8, "0.384898"),
    (5, 6, "1"),
    (5, 7, "1"),
    (5, 8, "1"),
    (5, 9, "0.577297"),
    (6, 7, "1"),
    (6, 8, "1"),
    (6, 9, "0.579201"),
    (6, 10, "0.605612"),
    (7, 8, "1"),
    (7, 9, "1"),
    (7, 10, "1"),
    (8, 9, "1"),
    (8, 10, "1"),
    (9, 10, "1"),
];

pub const LAMBDA: &[(usize, usize, &str)] = &[
    (1, 5, "1"),
    (1, 6, "1"),
    (1, 7, "1"),
    (1, 8, "1"),
    (1, 9, "1"),
    (1, 10, "1"),
    (2, 7, "1"),
    (2, 8, "1"),
    (2, 9, "1"),
    (2, 10, "1"),
    (3, 10, "1"),
    (4, 10, "0.725619"),
];

pub const RHO: &[(usize, usize, &str)] = &[
    (1, 4, "0.86974"),
    (2, 6, "0.939106"),
    (3, 7, "0.332976"),
    (3, 8, "1"),
    (3, 9, "1"),
    (4, 7, "0.0537254"),
    (4, 8, "0.615102"),
    (4, 9, "1"),
    (4, 10, "0.274381"),
    (5, 9, "0.422703"),
    (5, 10, "1"),
    (6, 9, "0.420799"),
    (6, 10, "0.394388"),
];
