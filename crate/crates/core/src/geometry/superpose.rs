use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Vec3};

/// Proper rigid motion `x -> R x + t` with the RMSD it achieved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Superposition {
    #[serde(with = "matrix_rows")]
    pub rotation: Matrix3<f64>,
    pub translation: Vec3,
    pub rmsd: f64,
}

impl Superposition {
    pub fn identity() -> Self {
        Superposition {
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
            rmsd: 0.0,
        }
    }

    pub fn transform(&self, x: &Vec3) -> Vec3 {
        self.rotation * x + self.translation
    }
}

mod matrix_rows {
    use nalgebra::Matrix3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Matrix3<f64>, s: S) -> Result<S::Ok, S::Error> {
        let rows: [[f64; 3]; 3] = std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]));
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Matrix3<f64>, D::Error> {
        let rows = <[[f64; 3]; 3]>::deserialize(d)?;
        Ok(Matrix3::from_fn(|r, c| rows[r][c]))
    }
}

/// Root-mean-square deviation of index-corresponded points.
pub fn rmsd(p: &[Vec3], q: &[Vec3]) -> Result<f64> {
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::CorrespondenceLengthMismatch(p.len(), q.len()));
    }
    let sum: f64 = p.iter().zip(q).map(|(a, b)| (a - b).norm_squared()).sum();
    Ok((sum / p.len() as f64).sqrt())
}

pub fn apply(s: &Superposition, points: &[Vec3]) -> Vec<Vec3> {
    points.iter().map(|x| s.transform(x)).collect()
}

pub fn centroid(points: &[Vec3]) -> Vec3 {
    points.iter().sum::<Vec3>() / points.len() as f64
}

/// Rank of the centred cloud, with a relative tolerance on the scatter spectrum.
fn spread_rank(points: &[Vec3]) -> usize {
    let c = centroid(points);
    let scatter: Matrix3<f64> = points
        .iter()
        .map(|x| {
            let d = x - c;
            d * d.transpose()
        })
        .sum();
    let mut eig: Vec<f64> = SymmetricEigen::new(scatter).eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let scale = eig[0].max(0.0);
    if scale <= 1e-12 {
        return 0;
    }
    eig.iter().filter(|&&e| e > scale * 1e-10).count()
}

/// Optimal proper rotation and translation taking `q` onto `p`, without
/// degeneracy checks. Valid for any non-empty corresponded clouds; the
/// rotation is not unique when the clouds are collinear.
pub(crate) fn superpose(p: &[Vec3], q: &[Vec3]) -> Result<Superposition> {
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::CorrespondenceLengthMismatch(p.len(), q.len()));
    }
    let pc = centroid(p);
    let qc = centroid(q);
    let covariance: Matrix3<f64> = p
        .iter()
        .zip(q)
        .map(|(a, b)| (b - qc) * (a - pc).transpose())
        .sum();
    let svd = covariance.svd(true, true);
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v_t requested").transpose();
    let mut d = Matrix3::identity();
    if (v * u.transpose()).determinant() < 0.0 {
        // singular values are sorted descending: flip the weakest direction
        d[(2, 2)] = -1.0;
    }
    let rotation = v * d * u.transpose();
    let translation = pc - rotation * qc;
    let mut s = Superposition {
        rotation,
        translation,
        rmsd: 0.0,
    };
    s.rmsd = rmsd(p, &apply(&s, q))?;
    Ok(s)
}

/// Kabsch superposition: the proper rigid motion minimizing
/// `rmsd(R q + t, p)`. Needs at least three points spanning a plane.
pub fn kabsch(p: &[Vec3], q: &[Vec3]) -> Result<Superposition> {
    if p.len() != q.len() {
        return Err(Error::CorrespondenceLengthMismatch(p.len(), q.len()));
    }
    if p.len() < 3 || spread_rank(p) < 2 || spread_rank(q) < 2 {
        return Err(Error::DegeneratePointSet);
    }
    superpose(p, q)
}
