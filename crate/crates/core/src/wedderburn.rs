//! Block assembly: equivalence classes of primitive idempotents, central
//! idempotents, matrix units, corner division algebras, and the explicit
//! isomorphism `A -> M_{n_1}(D_1) + ... + M_{n_k}(D_k)` with
//! `x -> (a_mu x b_nu)` in each block.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    corner_coords, frobenius_fixed_space, hom_space_coords, sandwich_span, AlgebraPresentation,
    CornerAlgebra, Subalgebra,
};
use crate::error::{Error, Result};
use crate::exactfield::{Matrix, PrimeField, SpanBasis};
use crate::idempotents::{
    decompose_identity, equivalence_witness, Equivalence, Idempotent, OrthogonalDecomposition,
};
use crate::semisimple::SemisimpleAlgebra;

/// Primitive idempotents of one class, with `a[mu]` in `e_1 A e_mu` and
/// `b[mu]` in `e_mu A e_1` such that `a b = e_1`, `b a = e_mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectingFamily {
    pub members: Vec<Idempotent>,
    pub a: Vec<Vec<u64>>,
    pub b: Vec<Vec<u64>>,
}

impl ConnectingFamily {
    pub fn class_rep(&self) -> &Idempotent {
        &self.members[0]
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixUnitSystem {
    /// `units[mu][nu] = b[mu] a[nu]`.
    pub units: Vec<Vec<Vec<u64>>>,
    pub block_identity: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct DivisionAlgebraPresentation {
    pub corner: CornerAlgebra,
    pub degree: usize,
}

#[derive(Clone, Debug)]
pub struct WedderburnBlock {
    pub n: usize,
    pub division: DivisionAlgebraPresentation,
    pub central_idempotent: Vec<u64>,
    pub family: ConnectingFamily,
    pub units: MatrixUnitSystem,
}

impl WedderburnBlock {
    pub fn degree(&self) -> usize {
        self.division.degree
    }
}

/// Flattened coordinate `(block, row, col, index)` of the target ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub index: usize,
}

/// One `M_n(D)` summand of the codomain.
#[derive(Clone, Debug)]
pub struct TargetBlock {
    pub n: usize,
    pub division: AlgebraPresentation,
    pub offset: usize,
}

impl TargetBlock {
    pub fn degree(&self) -> usize {
        self.division.dim()
    }

    fn entry_range(&self, row: usize, col: usize) -> std::ops::Range<usize> {
        let d = self.degree();
        let start = self.offset + (row * self.n + col) * d;
        start..start + d
    }
}

/// The direct sum of matrix rings over corner division algebras, with
/// elements stored as flat coordinate vectors in layout order.
#[derive(Clone, Debug)]
pub struct TargetRing {
    field: PrimeField,
    blocks: Vec<TargetBlock>,
    dim: usize,
}

/// Per block, an `n x n` grid of division-algebra coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrices(pub Vec<Vec<Vec<Vec<u64>>>>);

impl TargetRing {
    pub fn new(field: PrimeField, shapes: Vec<(usize, AlgebraPresentation)>) -> Self {
        let mut offset = 0;
        let blocks = shapes
            .into_iter()
            .map(|(n, division)| {
                let block = TargetBlock { n, division, offset };
                offset += n * n * block.degree();
                block
            })
            .collect();
        TargetRing {
            field,
            blocks,
            dim: offset,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[TargetBlock] {
        &self.blocks
    }

    pub fn layout(&self) -> Vec<LayoutEntry> {
        let mut out = Vec::with_capacity(self.dim);
        for (i, b) in self.blocks.iter().enumerate() {
            for row in 0..b.n {
                for col in 0..b.n {
                    for index in 0..b.degree() {
                        out.push(LayoutEntry {
                            block: i,
                            row,
                            col,
                            index,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn identity(&self) -> Vec<u64> {
        let mut out = vec![0; self.dim];
        for b in &self.blocks {
            for mu in 0..b.n {
                let r = b.entry_range(mu, mu);
                out[r].copy_from_slice(b.division.one_coords());
            }
        }
        out
    }

    /// Identity in block `i`, zero elsewhere.
    pub fn block_identity(&self, i: usize) -> Vec<u64> {
        let mut out = vec![0; self.dim];
        let b = &self.blocks[i];
        for mu in 0..b.n {
            out[b.entry_range(mu, mu)].copy_from_slice(b.division.one_coords());
        }
        out
    }

    /// Blockwise matrix product with entries multiplied in each `D_i`.
    pub fn multiply(&self, x: &[u64], y: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "target elements must have length {}",
                self.dim
            )));
        }
        let f = self.field;
        let mut out = vec![0; self.dim];
        for b in &self.blocks {
            let d = &b.division;
            for mu in 0..b.n {
                for nu in 0..b.n {
                    let mut acc = vec![0; b.degree()];
                    for k in 0..b.n {
                        let xe = &x[b.entry_range(mu, k)];
                        let ye = &y[b.entry_range(k, nu)];
                        if xe.iter().all(|&c| c == 0) || ye.iter().all(|&c| c == 0) {
                            continue;
                        }
                        let prod = d.mul_coords(xe, ye);
                        acc.iter_mut().zip(&prod).for_each(|(a, p)| *a = f.add(*a, *p));
                    }
                    out[b.entry_range(mu, nu)].copy_from_slice(&acc);
                }
            }
        }
        Ok(out)
    }

    pub fn to_blocks(&self, flat: &[u64]) -> Result<BlockMatrices> {
        if flat.len() != self.dim {
            return Err(Error::ShapeMismatch("flat target element has wrong length".into()));
        }
        Ok(BlockMatrices(
            self.blocks
                .iter()
                .map(|b| {
                    (0..b.n)
                        .map(|mu| (0..b.n).map(|nu| flat[b.entry_range(mu, nu)].to_vec()).collect())
                        .collect()
                })
                .collect(),
        ))
    }

    pub fn from_blocks(&self, m: &BlockMatrices) -> Result<Vec<u64>> {
        let shape_err = || Error::ShapeMismatch("block matrices do not match the layout".into());
        if m.0.len() != self.blocks.len() {
            return Err(shape_err());
        }
        let mut out = vec![0; self.dim];
        for (b, grid) in self.blocks.iter().zip(&m.0) {
            if grid.len() != b.n {
                return Err(shape_err());
            }
            for (mu, row) in grid.iter().enumerate() {
                if row.len() != b.n {
                    return Err(shape_err());
                }
                for (nu, entry) in row.iter().enumerate() {
                    if entry.len() != b.degree() {
                        return Err(shape_err());
                    }
                    for (slot, &v) in out[b.entry_range(mu, nu)].iter_mut().zip(entry) {
                        *slot = self.field.reduce(v);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionResult {
    pub seed: u64,
    pub decomposition: OrthogonalDecomposition,
    pub blocks: Vec<WedderburnBlock>,
    pub target: TargetRing,
    /// Column `j` is the image of `b_j` in layout coordinates.
    pub iso: Matrix,
    pub iso_inverse: Matrix,
}

impl DecompositionResult {
    pub fn layout(&self) -> Vec<LayoutEntry> {
        self.target.layout()
    }

    /// Sorted `(n_i, deg D_i)` pairs.
    pub fn block_multiset(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.blocks.iter().map(|b| (b.n, b.degree())).collect();
        v.sort();
        v
    }

    pub fn apply(&self, x: &[u64]) -> Result<Vec<u64>> {
        self.iso.mul_vec(x)
    }

    pub fn apply_inverse(&self, y: &[u64]) -> Result<Vec<u64>> {
        self.iso_inverse.mul_vec(y)
    }

    /// The data a verifier needs, detached from how it was computed.
    pub fn claim(&self) -> IsomorphismClaim {
        IsomorphismClaim {
            blocks: self
                .blocks
                .iter()
                .map(|b| ClaimedBlock {
                    n: b.n,
                    central_idempotent: b.central_idempotent.clone(),
                    matrix_units: b.units.units.clone(),
                    division_basis: b.division.corner.basis_lift().to_vec(),
                })
                .collect(),
            iso: self.iso.clone(),
            iso_inverse: self.iso_inverse.clone(),
        }
    }
}

pub fn group_by_equivalence(
    alg: &AlgebraPresentation,
    decomposition: &OrthogonalDecomposition,
) -> Result<Vec<ConnectingFamily>> {
    let mut classes: Vec<Vec<Idempotent>> = Vec::new();
    for part in &decomposition.parts {
        let mut placed = false;
        for class in classes.iter_mut() {
            if !hom_space_coords(alg, class[0].coords(), part.coords())?.is_zero() {
                class.push(part.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![part.clone()]);
        }
    }
    classes
        .into_iter()
        .map(|mut members| {
            members.sort();
            let rep = members[0].clone();
            let mut a = Vec::with_capacity(members.len());
            let mut b = Vec::with_capacity(members.len());
            for member in &members {
                match equivalence_witness(alg, member, &rep)? {
                    Equivalence::Equivalent(w) => {
                        a.push(w.a);
                        b.push(w.b);
                    }
                    Equivalence::Inequivalent => {
                        return Err(Error::InvariantViolation(
                            "class member is not equivalent to its representative".into(),
                        ))
                    }
                }
            }
            Ok(ConnectingFamily { members, a, b })
        })
        .collect()
}

pub fn central_idempotent(alg: &AlgebraPresentation, family: &ConnectingFamily) -> Result<Vec<u64>> {
    let c = family
        .members
        .iter()
        .fold(vec![0; alg.dim()], |acc, e| alg.add_coords(&acc, e.coords()));
    if !alg.is_idempotent_coords(&c) {
        return Err(Error::CentralityViolation("class sum is not idempotent".into()));
    }
    if !alg.is_central_coords(&c) {
        return Err(Error::CentralityViolation("class sum is not central".into()));
    }
    Ok(c)
}

/// Checks every relation `u[mu][nu] u[xi][eta] = delta(nu, xi) u[mu][eta]`
/// and `sum u[mu][mu] = identity`. Returns the first violation.
pub fn matrix_unit_violation(
    alg: &AlgebraPresentation,
    units: &[Vec<Vec<u64>>],
    identity: &[u64],
) -> Option<String> {
    let n = units.len();
    if units.iter().any(|row| row.len() != n) {
        return Some("matrix unit grid is not square".into());
    }
    let diag = (0..n).fold(vec![0; alg.dim()], |acc, m| alg.add_coords(&acc, &units[m][m]));
    if diag != identity {
        return Some("sum of diagonal units differs from the block identity".into());
    }
    let zero = vec![0; alg.dim()];
    for mu in 0..n {
        for nu in 0..n {
            let l = alg.left_regular_coords(&units[mu][nu]);
            for xi in 0..n {
                for eta in 0..n {
                    let prod = l.mul_vec(&units[xi][eta]).expect("shape");
                    let expected = if nu == xi { &units[mu][eta] } else { &zero };
                    if &prod != expected {
                        return Some(format!(
                            "units[{mu}][{nu}] * units[{xi}][{eta}] != {}",
                            if nu == xi {
                                format!("units[{mu}][{eta}]")
                            } else {
                                "0".to_string()
                            }
                        ));
                    }
                }
            }
        }
    }
    None
}

pub fn matrix_units(
    alg: &AlgebraPresentation,
    family: &ConnectingFamily,
    block_identity: &[u64],
) -> Result<MatrixUnitSystem> {
    for (mu, (a, b)) in family.a.iter().zip(&family.b).enumerate() {
        if alg.mul_coords(a, b) != family.class_rep().coords()
            || alg.mul_coords(b, a) != family.members[mu].coords()
        {
            return Err(Error::MatrixUnitViolation(format!("connecting pair {mu} is invalid")));
        }
    }
    let units: Vec<Vec<Vec<u64>>> = family
        .b
        .iter()
        .map(|b| family.a.iter().map(|a| alg.mul_coords(b, a)).collect())
        .collect();
    if let Some(msg) = matrix_unit_violation(alg, &units, block_identity) {
        return Err(Error::MatrixUnitViolation(msg));
    }
    Ok(MatrixUnitSystem {
        units,
        block_identity: block_identity.to_vec(),
    })
}

fn division_algebra(alg: &AlgebraPresentation, rep: &Idempotent) -> Result<DivisionAlgebraPresentation> {
    let corner = corner_coords(alg, rep.coords())?;
    let local = corner.local();
    if !local.is_commutative() || frobenius_fixed_space(local)?.len() != 1 {
        return Err(Error::InvariantViolation("representative corner is not a field".into()));
    }
    let degree = corner.dim();
    Ok(DivisionAlgebraPresentation { corner, degree })
}

/// The `(mu, nu)` entry of the image of `x` in `M_n(D)` is the
/// `D`-coordinate vector of `a[mu] x b[nu]`.
pub fn block_map(
    alg: &AlgebraPresentation,
    block: &WedderburnBlock,
    x: &[u64],
) -> Result<Vec<Vec<Vec<u64>>>> {
    let fam = &block.family;
    fam.a
        .iter()
        .enumerate()
        .map(|(mu, a)| {
            let ax = alg.mul_coords(a, x);
            fam.b
                .iter()
                .enumerate()
                .map(|(nu, b)| {
                    block.division.corner.restrict(&alg.mul_coords(&ax, b)).ok_or_else(|| {
                        Error::EntryOutsideCorner(format!("entry ({mu}, {nu})"))
                    })
                })
                .collect()
        })
        .collect()
}

/// Matrix of `x -> (a_mu x b_nu)` over all blocks, in layout coordinates.
/// Every `a_mu` must satisfy `e a_mu = a_mu` and every `b_nu` must satisfy
/// `b_nu e = b_nu` for the block's corner idempotent `e`, so that the
/// entries land in `eAe`.
fn assemble_map(
    alg: &AlgebraPresentation,
    target: &TargetRing,
    connecting: &[(Vec<Vec<u64>>, Vec<Vec<u64>>)],
    division_bases: &[SpanBasis],
) -> Matrix {
    let n = alg.dim();
    let f = alg.field();
    let mut iso = Matrix::zeros(f, target.dim(), n);
    for ((block, (a, b)), basis) in target.blocks().iter().zip(connecting).zip(division_bases) {
        let d = basis.dim();
        let pivots = basis.pivots();
        let rights: Vec<Matrix> = b.iter().map(|bv| alg.right_regular_coords(bv)).collect();
        for (mu, av) in a.iter().enumerate() {
            let left = alg.left_regular_coords(av);
            let mut picked = Matrix::zeros(f, d, n);
            for (r, &pc) in pivots.iter().enumerate() {
                for j in 0..n {
                    picked.set(r, j, left.get(pc, j));
                }
            }
            for (nu, right) in rights.iter().enumerate() {
                // rows: pivot coordinates of a_mu b_j b_nu for each j
                let lead = picked.mul(right).expect("shape");
                for j in 0..n {
                    let coords = basis.coords_from_pivots(&lead.column(j));
                    let range = block.entry_range(mu, nu);
                    for (t, v) in range.zip(coords) {
                        iso.set(t, j, v);
                    }
                }
            }
        }
    }
    iso
}

pub fn full_isomorphism(alg: &SemisimpleAlgebra, seed: u64, max_iters: usize) -> Result<DecompositionResult> {
    let decomposition = decompose_identity(alg, seed, max_iters)?;
    let families = group_by_equivalence(alg, &decomposition)?;
    let mut blocks = families
        .into_par_iter()
        .map(|family| {
            let c = central_idempotent(alg, &family)?;
            let units = matrix_units(alg, &family, &c)?;
            let division = division_algebra(alg, family.class_rep())?;
            let n = family.size();
            let rank = alg.left_regular_coords(&c).rank();
            if n * n * division.degree != rank {
                return Err(Error::InvariantViolation(format!(
                    "block dimension {} != n^2 deg = {}",
                    rank,
                    n * n * division.degree
                )));
            }
            let e = family.class_rep().coords();
            for (a, b) in family.a.iter().zip(&family.b) {
                if alg.mul_coords(e, a) != *a || alg.mul_coords(b, e) != *b {
                    return Err(Error::EntryOutsideCorner("connecting element outside eA / Ae".into()));
                }
            }
            Ok(WedderburnBlock {
                n,
                division,
                central_idempotent: c,
                family,
                units,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    blocks.sort_by(|x, y| {
        (x.n, x.degree(), &x.central_idempotent).cmp(&(y.n, y.degree(), &y.central_idempotent))
    });
    for (i, x) in blocks.iter().enumerate() {
        for y in &blocks[i + 1..] {
            if alg.mul_coords(&x.central_idempotent, &y.central_idempotent).iter().any(|&c| c != 0) {
                return Err(Error::CentralityViolation("central idempotents are not orthogonal".into()));
            }
        }
    }

    let target = TargetRing::new(
        alg.field(),
        blocks
            .iter()
            .map(|b| (b.n, b.division.corner.local().clone()))
            .collect(),
    );
    if target.dim() != alg.dim() {
        return Err(Error::NonBijective);
    }
    let connecting: Vec<_> = blocks
        .iter()
        .map(|b| (b.family.a.clone(), b.family.b.clone()))
        .collect();
    let bases: Vec<SpanBasis> = blocks
        .iter()
        .map(|b| b.division.corner.subalgebra().basis().clone())
        .collect();
    let iso = assemble_map(alg, &target, &connecting, &bases);
    let iso_inverse = iso.inverse().ok_or(Error::NonBijective)?;
    Ok(DecompositionResult {
        seed,
        decomposition,
        blocks,
        target,
        iso,
        iso_inverse,
    })
}

pub fn target_multiply(result: &DecompositionResult, x: &BlockMatrices, y: &BlockMatrices) -> Result<BlockMatrices> {
    let t = &result.target;
    t.to_blocks(&t.multiply(&t.from_blocks(x)?, &t.from_blocks(y)?)?)
}

// ---- verification ----

/// Serialized content of a decomposition, enough to re-prove the
/// isomorphism without recomputing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsomorphismClaim {
    pub blocks: Vec<ClaimedBlock>,
    pub iso: Matrix,
    pub iso_inverse: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimedBlock {
    pub n: usize,
    pub central_idempotent: Vec<u64>,
    pub matrix_units: Vec<Vec<Vec<u64>>>,
    pub division_basis: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyLevel {
    /// All basis pairs.
    Full,
    /// Pairs `(b_i, b_i)` and `(b_i, b_{i+1})` only.
    Fast,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub unit: bool,
    pub multiplicative: bool,
    pub bijective: bool,
    pub orthogonality: bool,
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.unit && self.multiplicative && self.bijective && self.orthogonality
    }
}

pub fn verify_isomorphism(alg: &AlgebraPresentation, result: &DecompositionResult) -> VerificationReport {
    verify_claim(alg, &result.claim(), VerifyLevel::Full)
}

/// Re-proves the isomorphism from a claim. The block map is rebuilt from
/// the matrix units alone: entry `(mu, nu)` of the image of `x` is
/// `u[0][mu] x u[nu][0]` read in the division basis.
pub fn verify_claim(alg: &AlgebraPresentation, claim: &IsomorphismClaim, level: VerifyLevel) -> VerificationReport {
    let mut report = VerificationReport::default();
    match prepare(alg, claim) {
        Err(msg) => {
            let n = alg.dim();
            for (i, block) in claim.blocks.iter().enumerate() {
                let well_formed = block.central_idempotent.len() == n
                    && block.matrix_units.iter().flatten().all(|u| u.len() == n);
                if well_formed {
                    if let Some(v) = matrix_unit_violation(alg, &block.matrix_units, &block.central_idempotent) {
                        report.failures.push(format!("multiplicative: block {i}: {v}"));
                        break;
                    }
                }
            }
            report.failures.push(msg);
        }
        Ok((target, rebuilt)) => {
            check_bijective(claim, &rebuilt, &mut report);
            check_unit(alg, &target, &rebuilt, &mut report);
            check_multiplicative(alg, claim, &target, &rebuilt, level, &mut report);
            check_orthogonality(alg, claim, &target, &rebuilt, &mut report);
        }
    }
    report
}

fn prepare(alg: &AlgebraPresentation, claim: &IsomorphismClaim) -> std::result::Result<(TargetRing, Matrix), String> {
    let n = alg.dim();
    let f = alg.field();
    let mut shapes = Vec::new();
    let mut connecting = Vec::new();
    let mut bases = Vec::new();
    for (i, block) in claim.blocks.iter().enumerate() {
        let units = &block.matrix_units;
        if block.n == 0 || units.len() != block.n || units.iter().any(|r| r.len() != block.n) {
            return Err(format!("block {i}: matrix unit grid does not have size n = {}", block.n));
        }
        if units.iter().flatten().any(|u| u.len() != n) || block.central_idempotent.len() != n {
            return Err(format!("block {i}: element of wrong length"));
        }
        let e = &units[0][0];
        let basis = SpanBasis::from_independent(f, n, block.division_basis.clone())
            .ok_or_else(|| format!("block {i}: division basis is not linearly independent"))?;
        if sandwich_span(alg, e, e).dim() != basis.dim()
            || basis.vectors().iter().any(|v| alg.mul_coords(&alg.mul_coords(e, v), e) != *v)
        {
            return Err(format!("block {i}: division basis does not span units[0][0] A units[0][0]"));
        }
        let division = Subalgebra::from_basis(alg, basis.clone(), e)
            .map_err(|err| format!("block {i}: division algebra: {err}"))?;
        let a: Vec<Vec<u64>> = (0..block.n).map(|mu| units[0][mu].clone()).collect();
        let b: Vec<Vec<u64>> = (0..block.n).map(|nu| units[nu][0].clone()).collect();
        if a.iter().any(|x| alg.mul_coords(e, x) != *x) || b.iter().any(|x| alg.mul_coords(x, e) != *x) {
            return Err(format!("block {i}: first row/column of units leaves units[0][0] A / A units[0][0]"));
        }
        shapes.push((block.n, division.local().clone()));
        connecting.push((a, b));
        bases.push(basis);
    }
    let target = TargetRing::new(f, shapes);
    if target.dim() != n {
        return Err(format!("target dimension {} differs from algebra dimension {n}", target.dim()));
    }
    let rebuilt = assemble_map(alg, &target, &connecting, &bases);
    Ok((target, rebuilt))
}

fn check_bijective(claim: &IsomorphismClaim, rebuilt: &Matrix, report: &mut VerificationReport) {
    let n = rebuilt.cols();
    let shape_ok = |m: &Matrix| m.rows() == n && m.cols() == n;
    if !shape_ok(&claim.iso) || !shape_ok(&claim.iso_inverse) {
        report.failures.push("bijective: iso matrices have the wrong shape".into());
        return;
    }
    if let Some(j) = (0..n).find(|&j| claim.iso.column(j) != rebuilt.column(j)) {
        report
            .failures
            .push(format!("bijective: iso_matrix column {j} differs from the matrix-unit map"));
        return;
    }
    let forward = claim.iso.mul(&claim.iso_inverse).map(|m| m.is_identity());
    let backward = claim.iso_inverse.mul(&claim.iso).map(|m| m.is_identity());
    if forward != Ok(true) || backward != Ok(true) {
        report.failures.push("bijective: iso_inverse is not the inverse of iso_matrix".into());
        return;
    }
    report.bijective = true;
}

fn check_unit(alg: &AlgebraPresentation, target: &TargetRing, rebuilt: &Matrix, report: &mut VerificationReport) {
    let image = rebuilt.mul_vec(alg.one_coords()).expect("shape");
    if image == target.identity() {
        report.unit = true;
    } else {
        report.failures.push("unit: image of 1_A is not the identity".into());
    }
}

fn check_multiplicative(
    alg: &AlgebraPresentation,
    claim: &IsomorphismClaim,
    target: &TargetRing,
    rebuilt: &Matrix,
    level: VerifyLevel,
    report: &mut VerificationReport,
) {
    for (i, block) in claim.blocks.iter().enumerate() {
        if let Some(msg) = matrix_unit_violation(alg, &block.matrix_units, &block.central_idempotent) {
            report.failures.push(format!("multiplicative: block {i}: {msg}"));
            return;
        }
    }
    let n = alg.dim();
    let images: Vec<Vec<u64>> = (0..n).map(|j| rebuilt.column(j)).collect();
    let pairs: Vec<(usize, usize)> = match level {
        VerifyLevel::Full => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        VerifyLevel::Fast => (0..n).flat_map(|i| [(i, i), (i, (i + 1) % n)]).collect(),
    };
    report.pairs_checked = pairs.len();
    let failure = pairs.par_iter().find_first(|&&(i, j)| {
        let lhs = rebuilt.mul_vec(alg.basis_product(i, j)).expect("shape");
        let rhs = target.multiply(&images[i], &images[j]).expect("shape");
        lhs != rhs
    });
    match failure {
        Some((i, j)) => report
            .failures
            .push(format!("multiplicative: image of b{i} b{j} != image(b{i}) image(b{j})")),
        None => report.multiplicative = true,
    }
}

fn check_orthogonality(
    alg: &AlgebraPresentation,
    claim: &IsomorphismClaim,
    target: &TargetRing,
    rebuilt: &Matrix,
    report: &mut VerificationReport,
) {
    let mut sum = vec![0; alg.dim()];
    for (i, block) in claim.blocks.iter().enumerate() {
        let c = &block.central_idempotent;
        if !alg.is_idempotent_coords(c) || !alg.is_central_coords(c) {
            report.failures.push(format!("orthogonality: c{i} is not a central idempotent"));
            return;
        }
        for (j, other) in claim.blocks.iter().enumerate().skip(i + 1) {
            if alg.mul_coords(c, &other.central_idempotent).iter().any(|&x| x != 0) {
                report.failures.push(format!("orthogonality: c{i} c{j} != 0"));
                return;
            }
        }
        if rebuilt.mul_vec(c).expect("shape") != target.block_identity(i) {
            report
                .failures
                .push(format!("orthogonality: image of c{i} is not the identity of block {i} alone"));
            return;
        }
        sum = alg.add_coords(&sum, c);
    }
    if sum != alg.one_coords() {
        report.failures.push("orthogonality: central idempotents do not sum to 1".into());
        return;
    }
    report.orthogonality = true;
}
