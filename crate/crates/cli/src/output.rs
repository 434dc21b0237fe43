//! CSV and matrix rendering.

use nalgebra::DMatrix;
use sigmasurf::surface::{PathIndependence, SurfacePoint};
use sigmasurf::Complex64;

/// 17 significant digits in scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Row-major `[re, im]` pairs.
pub fn matrix_rows(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn cloud_header(n: usize) -> String {
    let mut cols = vec!["xi_re".to_string(), "xi_im".to_string()];
    cols.extend((1..n).map(|i| format!("X_{i}")));
    for i in 1..=n {
        for j in (i + 1)..=n {
            cols.push(format!("X_{i}_{j}+"));
            cols.push(format!("X_{i}_{j}-"));
        }
    }
    cols.join(",")
}

/// A `# N=…,r=…,C=…` line, the column names, then one row per point.
pub fn cloud_csv(n: usize, r: usize, c: f64, pts: &[SurfacePoint]) -> String {
    let mut s = format!("# N={n},r={r},C={}\n{}\n", fmt17(c), cloud_header(n));
    for p in pts {
        let row: Vec<String> = [p.xi_re, p.xi_im]
            .iter()
            .chain(&p.x_diag)
            .chain(&p.x_offdiag)
            .map(|&x| fmt17(x))
            .collect();
        s += &row.join(",");
        s.push('\n');
    }
    s
}

/// Entries of both contour integrals, with the gap and verdict up front.
pub fn integral_csv(pi: &PathIndependence, el: f64) -> String {
    let mut s = format!(
        "# max_gap={},independent={},euler_lagrange_residual={}\n",
        fmt17(pi.max_gap),
        pi.independent,
        fmt17(el)
    );
    s += "i,j,straight_re,straight_im,detour_re,detour_im\n";
    for i in 0..pi.straight.nrows() {
        for j in 0..pi.straight.ncols() {
            let (a, b) = (pi.straight[(i, j)], pi.detour[(i, j)]);
            s += &format!(
                "{},{},{},{},{},{}\n",
                i + 1,
                j + 1,
                fmt17(a.re),
                fmt17(a.im),
                fmt17(b.re),
                fmt17(b.im)
            );
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt17(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn header_columns() {
        assert_eq!(
            cloud_header(3),
            "xi_re,xi_im,X_1,X_2,X_1_2+,X_1_2-,X_1_3+,X_1_3-,X_2_3+,X_2_3-"
        );
    }
}
