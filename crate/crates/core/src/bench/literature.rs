//! Published error values of competing methods, embedded for report rendering.
//!
//! None of these methods is implemented here; the numbers are quoted as
//! printed. `reported` holds the values printed for the trapezium + DJM
//! method in the same tables.

/// Errors of one published method along a table's rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparatorColumn {
    /// CSV-friendly column name.
    pub key: &'static str,
    pub method: &'static str,
    pub source: &'static str,
    pub values: &'static [f64],
    /// CPU seconds as printed, where the source reports them.
    pub times: Option<&'static [f64]>,
}

impl ComparatorColumn {
    /// `key[source]`, the CSV header used for this column.
    pub fn header(&self) -> String {
        format!("{}[{}]", self.key, self.source)
    }
}

/// Pointwise errors on `x = 0.1, 0.2, …, 1.0` for the first example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseTable {
    pub h: f64,
    pub reported: &'static [f64],
    pub comparators: &'static [ComparatorColumn],
    /// Row indices whose printed value breaks the monotone trend.
    pub suspect_rows: &'static [usize],
}

/// Maximum errors for node counts `n` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxErrorTable {
    pub nodes: &'static [usize],
    pub reported: &'static [f64],
    pub reported_times: &'static [f64],
    pub comparators: &'static [ComparatorColumn],
}

impl MaxErrorTable {
    pub fn row(&self, n: usize) -> Option<usize> {
        self.nodes.iter().position(|&m| m == n)
    }
}

pub const WOLFE_PHILLIPS: &str = "Wolfe-Phillips";
pub const DAY: &str = "Day";
pub const DEHGHAN_SALEHI: &str = "Dehghan-Salehi";

pub const REPORT_XS: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

pub const EX1_H_0_1: PointwiseTable = PointwiseTable {
    h: 0.1,
    reported: &[
        2.3e-5, 1.2e-4, 3.1e-4, 6.2e-3, 1.0e-3, 1.7e-3, 2.8e-3, 4.4e-3, 6.8e-3, 1.0e-2,
    ],
    comparators: &[
        ComparatorColumn {
            key: "runge_kutta_o3",
            method: "third-order Runge-Kutta",
            source: WOLFE_PHILLIPS,
            values: &[
                5.5e-4, 1.2e-3, 1.9e-3, 2.8e-3, 3.9e-3, 5.8e-3, 7.3e-3, 1.0e-2, 1.4e-2, 2.0e-2,
            ],
            times: None,
        },
        ComparatorColumn {
            key: "predictor_corrector_o3",
            method: "third-order predictor-corrector",
            source: WOLFE_PHILLIPS,
            values: &[
                5.0e-5, 5.2e-5, 2.7e-4, 6.6e-4, 1.2e-3, 2.0e-3, 3.1e-3, 4.8e-3, 7.3e-3, 1.1e-2,
            ],
            times: None,
        },
        ComparatorColumn {
            key: "multistep_o3",
            method: "third-order explicit multistep",
            source: WOLFE_PHILLIPS,
            values: &[
                5.0e-5, 8.1e-4, 7.5e-4, 2.1e-3, 2.5e-3, 4.7e-3, 6.0e-3, 1.0e-2, 1.4e-2, 2.1e-2,
            ],
            times: None,
        },
        ComparatorColumn {
            key: "day",
            method: "trapezoidal (Day)",
            source: DAY,
            values: &[
                5.4e-4, 1.1e-3, 1.9e-3, 2.8e-3, 4.0e-3, 5.6e-3, 7.9e-3, 1.1e-2, 1.5e-2, 2.2e-2,
            ],
            times: None,
        },
    ],
    suspect_rows: &[3],
};

pub const EX1_H_0_025: PointwiseTable = PointwiseTable {
    h: 0.025,
    reported: &[
        2.1e-6, 9.0e-6, 2.1e-5, 4.1e-5, 7.0e-5, 1.7e-4, 1.8e-4, 2.8e-4, 4.3e-4, 6.6e-4,
    ],
    comparators: &[
        ComparatorColumn {
            key: "runge_kutta_o3",
            method: "third-order Runge-Kutta",
            source: WOLFE_PHILLIPS,
            values: &[
                3.3e-5, 7.1e-5, 1.2e-4, 1.7e-4, 2.4e-4, 3.3e-4, 4.5e-4, 6.3e-4, 8.7e-4, 1.2e-3,
            ],
            times: None,
        },
        ComparatorColumn {
            key: "predictor_corrector_o3",
            method: "third-order predictor-corrector",
            source: WOLFE_PHILLIPS,
            values: &[
                2.2e-6, 1.1e-5, 2.7e-5, 5.0e-5, 8.4e-5, 1.3e-4, 2.0e-4, 3.1e-4, 4.6e-4, 7.0e-4,
            ],
            times: None,
        },
        ComparatorColumn {
            key: "multistep_o3",
            method: "third-order explicit multistep",
            source: WOLFE_PHILLIPS,
            values: &[
                7.7e-6, 2.6e-5, 5.7e-5, 1.0e-4, 1.7e-4, 2.6e-4, 4.0e-4, 5.9e-4, 8.8e-4, 1.3e-3,
            ],
            times: None,
        },
        ComparatorColumn {
            key: "day",
            method: "trapezoidal (Day)",
            source: DAY,
            values: &[
                3.3e-5, 7.1e-5, 1.1e-4, 1.7e-4, 2.5e-4, 3.5e-4, 5.0e-4, 7.0e-4, 1.0e-3, 1.4e-3,
            ],
            times: None,
        },
    ],
    suspect_rows: &[],
};

pub const EX2_MAX: MaxErrorTable = MaxErrorTable {
    nodes: &[5, 9, 17, 33, 65, 129],
    reported: &[1.49e-3, 4.54e-4, 1.26e-4, 3.35e-5, 8.26e-6, 2.19e-6],
    reported_times: &[0.00, 0.00, 0.00, 0.01, 0.04, 0.15],
    comparators: &[
        ComparatorColumn {
            key: "linear_meshless",
            method: "linear moving least squares",
            source: DEHGHAN_SALEHI,
            values: &[2.83e-3, 7.22e-4, 2.25e-4, 6.93e-5, 2.19e-5, 6.58e-6],
            times: Some(&[0.42, 0.68, 0.76, 0.87, 0.95, 1.40]),
        },
        ComparatorColumn {
            key: "quadratic_meshless",
            method: "quadratic moving least squares",
            source: DEHGHAN_SALEHI,
            values: &[2.21e-4, 3.41e-5, 9.98e-6, 3.26e-6, 1.87e-6, 1.28e-6],
            times: Some(&[0.58, 0.79, 1.16, 1.85, 2.15, 2.91]),
        },
    ],
};

pub const EX3_MAX: MaxErrorTable = MaxErrorTable {
    nodes: &[5, 9, 17, 33, 65, 129],
    reported: &[8.96e-3, 2.33e-4, 6.13e-5, 1.59e-5, 4.10e-6, 1.04e-6],
    reported_times: &[0.00, 0.00, 0.00, 0.01, 0.04, 0.17],
    comparators: &[
        ComparatorColumn {
            key: "linear_meshless",
            method: "linear moving least squares",
            source: DEHGHAN_SALEHI,
            values: &[5.84e-3, 1.75e-3, 4.88e-4, 1.30e-4, 3.21e-5, 8.19e-6],
            times: Some(&[0.45, 0.57, 0.65, 0.72, 1.68, 4.83]),
        },
        ComparatorColumn {
            key: "quadratic_meshless",
            method: "quadratic moving least squares",
            source: DEHGHAN_SALEHI,
            values: &[1.96e-4, 2.42e-5, 3.48e-6, 6.55e-7, 5.75e-7, 6.05e-7],
            times: Some(&[0.46, 0.58, 0.73, 0.87, 1.66, 5.61]),
        },
    ],
};

/// Pointwise table published for `name` at step `h`, if any.
pub fn pointwise(name: &str, h: f64) -> Option<&'static PointwiseTable> {
    match name {
        "ex1" => [&EX1_H_0_1, &EX1_H_0_025]
            .into_iter()
            .find(|t| (t.h - h).abs() < 1e-12),
        _ => None,
    }
}

pub fn max_error(name: &str) -> Option<&'static MaxErrorTable> {
    match name {
        "ex2" => Some(&EX2_MAX),
        "ex3" => Some(&EX3_MAX),
        _ => None,
    }
}
