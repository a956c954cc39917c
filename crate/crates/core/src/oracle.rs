//! Closed-form solution of 2×2 classical zero-sum games, used to cross-check
//! the quantum solver on diagonal observables.

/// Value and optimal mixed strategies of a classical matrix game where the
/// row player maximizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSolution {
    pub value: f64,
    pub row_mix: [f64; 2],
    pub col_mix: [f64; 2],
}

pub fn classical_minimax_oracle(payoff: [[f64; 2]; 2]) -> ClassicalSolution {
    let [[a, b], [c, d]] = payoff;

    let row_floor = [a.min(b), c.min(d)];
    let col_ceiling = [a.max(c), b.max(d)];
    let maximin = row_floor[0].max(row_floor[1]);
    let minimax = col_ceiling[0].min(col_ceiling[1]);

    if maximin == minimax {
        // saddle point in pure strategies
        let row = if row_floor[0] >= row_floor[1] { 0 } else { 1 };
        let col = if col_ceiling[0] <= col_ceiling[1] { 0 } else { 1 };
        let mut row_mix = [0.0; 2];
        let mut col_mix = [0.0; 2];
        row_mix[row] = 1.0;
        col_mix[col] = 1.0;
        return ClassicalSolution {
            value: maximin,
            row_mix,
            col_mix,
        };
    }

    // no saddle point: both players mix strictly, and a + d - b - c != 0
    let denom = a + d - b - c;
    let p = (d - c) / denom;
    let q = (d - b) / denom;
    ClassicalSolution {
        value: (a * d - b * c) / denom,
        row_mix: [p, 1.0 - p],
        col_mix: [q, 1.0 - q],
    }
}
