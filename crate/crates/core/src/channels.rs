//! Bundled example channels, so every experiment and test runs without
//! external files.

use crate::error::Result;
use crate::simplex::Channel;

/// The 5x5 example channel used for the reference trajectory (published in
/// the source experiment to three decimals).
///
/// The third row of the published matrix sums to 0.999; the fixture keeps the
/// printed values verbatim, because that is the matrix the reference
/// trajectory (capacity 0.26559 at order 1.5, stop near iteration 142) was
/// produced with. Rescaling the row to sum to 1 shifts the trajectory by
/// around 2e-4, well above the five-digit resolution of the reference values.
pub fn nakagawa5() -> Channel {
    Channel::from_rows_verbatim(&[
        &[0.600, 0.100, 0.100, 0.100, 0.100],
        &[0.100, 0.600, 0.100, 0.100, 0.100],
        &[0.231, 0.231, 0.066, 0.179, 0.292],
        &[0.161, 0.341, 0.226, 0.226, 0.046],
        &[0.341, 0.161, 0.226, 0.046, 0.226],
    ])
}

/// The noiseless n-ary channel (identity matrix).
pub fn identity(n: usize) -> Result<Channel> {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect())
        .collect();
    Channel::from_rows(&rows)
}

/// Binary symmetric channel with the given crossover probability.
pub fn bsc(crossover: f64) -> Result<Channel> {
    Channel::from_rows(&[
        vec![1.0 - crossover, crossover],
        vec![crossover, 1.0 - crossover],
    ])
}

/// A channel whose output ignores the input (three identical rows): capacity
/// zero for every order.
pub fn useless3() -> Channel {
    let row = vec![0.2, 0.5, 0.3];
    Channel::from_rows(&[row.clone(), row.clone(), row]).expect("static rows are stochastic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nakagawa5_keeps_published_decimals() {
        let w = nakagawa5();
        assert_eq!((w.n_in(), w.n_out()), (5, 5));
        assert_eq!(w.prob(0, 0), 0.600);
        assert_eq!(w.prob(2, 2), 0.066);
        let row3_sum: f64 = w.row(2).iter().sum();
        assert!((row3_sum - 0.999).abs() < 1e-12, "row 3 stays as published");
        for x in [0, 1, 3, 4] {
            let s: f64 = w.row(x).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert!(!w.was_renormalized());
    }

    #[test]
    fn identity_and_bsc_shapes() {
        let id4 = identity(4).unwrap();
        assert_eq!(id4.prob(2, 2), 1.0);
        assert_eq!(id4.prob(2, 3), 0.0);

        let b = bsc(0.1).unwrap();
        assert_eq!(b.prob(0, 0), 0.9);
        assert_eq!(b.prob(0, 1), 0.1);

        assert!(bsc(1.5).is_err());
    }

    #[test]
    fn useless3_rows_are_identical() {
        let w = useless3();
        assert_eq!(w.row(0), w.row(1));
        assert_eq!(w.row(1), w.row(2));
    }
}
