use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

use super::gf2::{rank_mod2, BitMatrix};
use super::smith::{invariant_factors, smith_normal_form};
use super::ExactMatrix;
use crate::error::{Error, Result};

/// Coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Ring {
    #[default]
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Z2")]
    Mod2,
}

impl Ring {
    pub fn name(self) -> &'static str {
        match self {
            Ring::Integers => "Z",
            Ring::Mod2 => "Z2",
        }
    }
}

impl std::str::FromStr for Ring {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "Z" | "z" | "ZZ" => Ok(Ring::Integers),
            "Z2" | "z2" | "F2" | "GF2" => Ok(Ring::Mod2),
            _ => Err(format!("unknown ring {s:?}; expected Z or Z2")),
        }
    }
}

/// A finitely generated abelian group `ℤ^free ⊕ ⊕ ℤ/tᵢ` with `t₁ | t₂ | …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of even invariant factors.
    pub fn even_torsion(&self) -> usize {
        self.torsion.iter().filter(|t| t.is_even()).count()
    }

    pub fn divisibility_holds(&self) -> bool {
        self.torsion.iter().all(|t| *t > BigInt::one())
            && self.torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0]))
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl Serialize for HomologyGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HomologyGroup", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        st.serialize_field("torsion", &torsion_json(&self.torsion))?;
        st.end()
    }
}

/// Invariant factors as JSON numbers when they fit in 64 bits, strings otherwise.
pub fn torsion_json(t: &[BigInt]) -> Vec<serde_json::Value> {
    t.iter()
        .map(|v| match u64::try_from(v) {
            Ok(x) => serde_json::Value::from(x),
            Err(_) => serde_json::Value::from(v.to_string()),
        })
        .collect()
}

fn check_shapes(d_in: &ExactMatrix, d_out: &ExactMatrix) -> Result<usize> {
    let dim = d_in.rows();
    if d_out.cols() != dim {
        return Err(Error::Dimension(format!(
            "incoming map lands in rank {dim}, outgoing map starts at rank {}",
            d_out.cols()
        )));
    }
    Ok(dim)
}

fn check_composition(d_in: &ExactMatrix, d_out: &ExactMatrix, ring: Ring) -> Result<()> {
    let comp = d_out.mul(d_in);
    let nonzero = match ring {
        Ring::Integers => !comp.is_zero(),
        Ring::Mod2 => comp.entries().any(|(_, _, v)| v.is_odd()),
    };
    if nonzero {
        return Err(Error::NonzeroComposition(format!(
            "{} nonzero entries in a {}x{} product",
            comp.nnz(),
            comp.rows(),
            comp.cols()
        )));
    }
    Ok(())
}

/// Homology at the middle group of `· --d_in--> C --d_out--> ·`.
///
/// ```
/// use annular_skein::algebra::{homology, ExactMatrix, Ring};
/// let d_in = ExactMatrix::from_rows(&[&[2]]);
/// let d_out = ExactMatrix::zeros(0, 1);
/// let h = homology(&d_in, &d_out, Ring::Integers).unwrap();
/// assert_eq!(h.to_string(), "Z/2");
/// ```
pub fn homology(d_in: &ExactMatrix, d_out: &ExactMatrix, ring: Ring) -> Result<HomologyGroup> {
    let dim = check_shapes(d_in, d_out)?;
    check_composition(d_in, d_out, ring)?;
    Ok(match ring {
        Ring::Integers => {
            let f_in = invariant_factors(d_in);
            let r_out = invariant_factors(d_out).len();
            HomologyGroup {
                free_rank: dim - f_in.len() - r_out,
                torsion: f_in.into_iter().filter(|d| !d.is_one()).collect(),
            }
        }
        Ring::Mod2 => HomologyGroup::free(dim - rank_mod2(d_in) - rank_mod2(d_out)),
    })
}

/// One generator of a homology group: its order (zero when free) and a
/// representative cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassGenerator {
    pub order: BigInt,
    pub representative: Vec<BigInt>,
}

#[derive(Debug, Clone)]
enum Coordinates {
    Integers {
        /// Rows `r..` of `V⁻¹` from the outgoing map's Smith form.
        v_inv_tail: ExactMatrix,
        p: ExactMatrix,
        /// Index into the kernel coordinates and order, per generator.
        kept: Vec<(usize, BigInt)>,
    },
    Mod2 {
        /// Columns: independent boundaries, then the chosen complement.
        frame: BitMatrix,
        boundaries: usize,
    },
}

/// Explicit basis of a homology group with a coordinate map on cycles.
#[derive(Debug, Clone)]
pub struct HomologyBasis {
    pub ring: Ring,
    pub group: HomologyGroup,
    pub generators: Vec<ClassGenerator>,
    d_out: ExactMatrix,
    coords: Coordinates,
}

impl HomologyBasis {
    pub fn new(d_in: &ExactMatrix, d_out: &ExactMatrix, ring: Ring) -> Result<Self> {
        let dim = check_shapes(d_in, d_out)?;
        check_composition(d_in, d_out, ring)?;
        match ring {
            Ring::Integers => Self::over_integers(d_in, d_out, dim),
            Ring::Mod2 => Ok(Self::over_mod2(d_in, d_out, dim)),
        }
    }

    fn over_integers(d_in: &ExactMatrix, d_out: &ExactMatrix, dim: usize) -> Result<Self> {
        let outer = smith_normal_form(d_out);
        let r = outer.rank();
        let kernel = outer.v.column_slice(r..dim);
        let v_inv_tail = outer.v_inv.row_slice(r..dim);
        let m = v_inv_tail.mul(d_in);
        let inner = smith_normal_form(&m);
        let s = inner.rank();
        let kappa = dim - r;
        let mut kept = Vec::new();
        let mut generators = Vec::new();
        let mut torsion = Vec::new();
        for i in 0..kappa {
            let order = if i < s { inner.diagonal[i].clone() } else { BigInt::zero() };
            if order.is_one() {
                continue;
            }
            if !order.is_zero() {
                torsion.push(order.clone());
            }
            let col = inner.u_inv.column(i);
            generators.push(ClassGenerator {
                order: order.clone(),
                representative: kernel.mul_vec(&col),
            });
            kept.push((i, order));
        }
        Ok(HomologyBasis {
            ring: Ring::Integers,
            group: HomologyGroup {
                free_rank: kappa - s,
                torsion,
            },
            generators,
            d_out: d_out.clone(),
            coords: Coordinates::Integers {
                v_inv_tail,
                p: inner.u,
                kept,
            },
        })
    }

    fn over_mod2(d_in: &ExactMatrix, d_out: &ExactMatrix, dim: usize) -> Self {
        let kernel = BitMatrix::from_exact(d_out).kernel();
        let image = BitMatrix::from_exact(d_in);
        let mut columns: Vec<Vec<bool>> = (0..image.cols())
            .map(|c| (0..dim).map(|r| image.get(r, c)).collect())
            .collect();
        let n_image = columns.len();
        columns.extend(kernel);
        let mut reduced = BitMatrix::from_columns(dim, &columns);
        let pivots = reduced.rref();
        let boundary_cols: Vec<usize> = pivots.iter().copied().filter(|&c| c < n_image).collect();
        let complement: Vec<usize> = pivots.iter().copied().filter(|&c| c >= n_image).collect();
        let frame_cols: Vec<Vec<bool>> = boundary_cols
            .iter()
            .chain(&complement)
            .map(|&c| columns[c].clone())
            .collect();
        let generators = complement
            .iter()
            .map(|&c| ClassGenerator {
                order: BigInt::zero(),
                representative: columns[c].iter().map(|&b| BigInt::from(b as u8)).collect(),
            })
            .collect::<Vec<_>>();
        HomologyBasis {
            ring: Ring::Mod2,
            group: HomologyGroup::free(generators.len()),
            generators,
            d_out: d_out.clone(),
            coords: Coordinates::Mod2 {
                frame: BitMatrix::from_columns(dim, &frame_cols),
                boundaries: boundary_cols.len(),
            },
        }
    }

    /// Class of a cycle in generator coordinates; torsion coordinates are
    /// reduced into `0..order`, all coordinates reduced mod 2 over `Z2`.
    pub fn coordinates(&self, z: &[BigInt]) -> Result<Vec<BigInt>> {
        let boundary = self.d_out.mul_vec(z);
        let is_cycle = match self.ring {
            Ring::Integers => boundary.iter().all(Zero::is_zero),
            Ring::Mod2 => boundary.iter().all(|v| v.is_even()),
        };
        if !is_cycle {
            return Err(Error::Dimension("vector is not a cycle".into()));
        }
        match &self.coords {
            Coordinates::Integers { v_inv_tail, p, kept } => {
                let c = v_inv_tail.mul_vec(z);
                let y = p.mul_vec(&c);
                Ok(kept
                    .iter()
                    .map(|(i, order)| {
                        if order.is_zero() {
                            y[*i].clone()
                        } else {
                            y[*i].mod_floor(order)
                        }
                    })
                    .collect())
            }
            Coordinates::Mod2 { frame, boundaries } => {
                let bits: Vec<bool> = z.iter().map(|v| v.is_odd()).collect();
                let x = frame
                    .solve(&bits)
                    .ok_or_else(|| Error::Dimension("cycle outside kernel span".into()))?;
                Ok(x[*boundaries..].iter().map(|&b| BigInt::from(b as u8)).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differentials_keep_the_group() {
        let h = homology(&ExactMatrix::zeros(2, 0), &ExactMatrix::zeros(0, 2), Ring::Integers).unwrap();
        assert_eq!(h, HomologyGroup::free(2));
    }

    #[test]
    fn cokernel_of_doubling() {
        let h = homology(&ExactMatrix::from_rows(&[&[2]]), &ExactMatrix::zeros(0, 1), Ring::Integers).unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion, vec![BigInt::from(2)]);
        let h2 = homology(&ExactMatrix::from_rows(&[&[2]]), &ExactMatrix::zeros(0, 1), Ring::Mod2).unwrap();
        assert_eq!(h2, HomologyGroup::free(1));
    }

    #[test]
    fn nonzero_composition_is_rejected() {
        let one = ExactMatrix::from_rows(&[&[1]]);
        assert!(matches!(homology(&one, &one, Ring::Integers), Err(Error::NonzeroComposition(_))));
    }

    #[test]
    fn basis_coordinates_detect_classes() {
        // C: Z^3, d_in = (1,1,0)ᵀ·2, d_out = (1,-1,0)
        let d_in = ExactMatrix::from_rows(&[&[2], &[2], &[0]]);
        let d_out = ExactMatrix::from_rows(&[&[1, -1, 0]]);
        let b = HomologyBasis::new(&d_in, &d_out, Ring::Integers).unwrap();
        assert_eq!(b.group.free_rank, 1);
        assert_eq!(b.group.torsion, vec![BigInt::from(2)]);
        for (i, g) in b.generators.iter().enumerate() {
            let c = b.coordinates(&g.representative).unwrap();
            for (j, v) in c.iter().enumerate() {
                assert_eq!(*v == BigInt::one(), i == j, "generator {i} coordinate {j}");
            }
        }
        let boundary = vec![BigInt::from(2), BigInt::from(2), BigInt::zero()];
        assert!(b.coordinates(&boundary).unwrap().iter().all(Zero::is_zero));
        assert!(b.coordinates(&[BigInt::one(), BigInt::zero(), BigInt::zero()]).is_err());
    }

    #[test]
    fn mod2_basis_matches_rank() {
        let d_in = ExactMatrix::from_rows(&[&[2], &[2], &[0]]);
        let d_out = ExactMatrix::from_rows(&[&[1, -1, 0]]);
        let b = HomologyBasis::new(&d_in, &d_out, Ring::Mod2).unwrap();
        assert_eq!(b.group.free_rank, 2);
        let h = homology(&d_in, &d_out, Ring::Mod2).unwrap();
        assert_eq!(h.free_rank, 2);
    }
}
