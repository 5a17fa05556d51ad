//! Pauli strings, Clifford tableaux and symbolic Pauli frames.
//!
//! A [`PauliString`] is stored as `i^r · X^x · Z^z` with `Y = iXZ`; the text
//! form uses the usual letters and a sign prefix (`"+XIZ"`, `"-iYY"`), with
//! the leftmost letter acting on qubit 0.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boolfun::{FrameForm, Var};
use crate::error::{Error, Result};
use crate::linalg::{c, kron, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> Vec<usize> {
        use CliffordGate::*;
        match *self {
            H(q) | S(q) | Sdg(q) | X(q) | Y(q) | Z(q) => vec![q],
            Cnot(a, b) | Cz(a, b) | Swap(a, b) => vec![a, b],
        }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { qubit: q, count: n });
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidCircuit(format!(
                "two-qubit gate on repeated qubit {}",
                qs[0]
            )));
        }
        Ok(())
    }

    pub fn inverse(&self) -> CliffordGate {
        match *self {
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            g => g,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
    r: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self {
            x: vec![false; n],
            z: vec![false; n],
            r: 0,
        }
    }

    /// `i^r · X^x · Z^z`.
    pub fn from_xz(x: Vec<bool>, z: Vec<bool>, r: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: z.len(),
            });
        }
        Ok(Self { x, z, r: r % 4 })
    }

    pub fn single_x(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.x[q] = true;
        p
    }

    pub fn single_z(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.z[q] = true;
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    /// Exponent `r` of the internal form `i^r X^x Z^z`.
    pub fn xz_phase(&self) -> u8 {
        self.r
    }

    fn y_count(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .filter(|(a, b)| **a && **b)
            .count()
    }

    /// Exponent `k` of the literal phase `i^k` in front of the letter string.
    pub fn literal_phase(&self) -> u8 {
        ((self.r as usize + 4 * self.y_count() - self.y_count()) % 4) as u8
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .filter(|(a, b)| **a || **b)
            .count()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.weight() == 0
    }

    pub fn eq_up_to_phase(&self, other: &PauliString) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub fn with_xz_phase(mut self, r: u8) -> Self {
        self.r = r % 4;
        self
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                got: other.num_qubits(),
            });
        }
        Ok(())
    }

    /// Operator product `self · other`.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        // Z^z1 X^x2 = (-1)^{z1·x2} X^x2 Z^z1
        let swaps = self
            .z
            .iter()
            .zip(&other.x)
            .filter(|(a, b)| **a && **b)
            .count();
        let r = (self.r as usize + other.r as usize + 2 * swaps) % 4;
        Ok(PauliString {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            r: r as u8,
        })
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        let s = (0..self.num_qubits())
            .filter(|&q| (self.x[q] && other.z[q]) ^ (self.z[q] && other.x[q]))
            .count();
        Ok(s % 2 == 0)
    }

    /// Replaces `self` by `G · self · G†`.
    pub fn apply_clifford(&mut self, gate: &CliffordGate) -> Result<()> {
        gate.check(self.num_qubits())?;
        let mut r = self.r as usize;
        match *gate {
            CliffordGate::H(q) => {
                r += 2 * (self.x[q] & self.z[q]) as usize;
                std::mem::swap(&mut self.x[q], &mut self.z[q]);
            }
            CliffordGate::S(q) => {
                r += self.x[q] as usize;
                self.z[q] ^= self.x[q];
            }
            CliffordGate::Sdg(q) => {
                r += 3 * self.x[q] as usize;
                self.z[q] ^= self.x[q];
            }
            CliffordGate::X(q) => r += 2 * self.z[q] as usize,
            CliffordGate::Z(q) => r += 2 * self.x[q] as usize,
            CliffordGate::Y(q) => r += 2 * (self.x[q] ^ self.z[q]) as usize,
            CliffordGate::Cnot(ctl, tgt) => {
                self.x[tgt] ^= self.x[ctl];
                self.z[ctl] ^= self.z[tgt];
            }
            CliffordGate::Cz(a, b) => {
                r += 2 * (self.x[a] & self.x[b]) as usize;
                self.z[a] ^= self.x[b];
                self.z[b] ^= self.x[a];
            }
            CliffordGate::Swap(a, b) => {
                self.x.swap(a, b);
                self.z.swap(a, b);
            }
        }
        self.r = (r % 4) as u8;
        Ok(())
    }

    /// Dense matrix; qubit `q` is bit `q` of the basis index.
    pub fn to_matrix(&self) -> CMatrix {
        let i = c(0.0, 1.0);
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let mut m = CMatrix::from_element(1, 1, one);
        for q in 0..self.num_qubits() {
            let xm = CMatrix::from_row_slice(2, 2, &[zero, one, one, zero]);
            let zm = CMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]);
            let id = CMatrix::identity(2, 2);
            let local =
                (if self.x[q] { xm } else { id.clone() }) * (if self.z[q] { zm } else { id });
            m = kron(&local, &m);
        }
        m * i.powu(self.r as u32)
    }

    pub fn phase_factor(&self) -> Complex64 {
        c(0.0, 1.0).powu(self.r as u32)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.literal_phase() as usize];
        write!(f, "{prefix}")?;
        for q in 0..self.num_qubits() {
            let ch = match (self.x[q], self.z[q]) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let syntax = |message: String| Error::Syntax { line: 1, message };
        let s = s.trim();
        let (k, rest) = if let Some(r) = s.strip_prefix("+i") {
            (1, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (3, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            return Err(syntax(format!("Pauli string `{s}` needs a sign prefix")));
        };
        let mut x = Vec::with_capacity(rest.len());
        let mut z = Vec::with_capacity(rest.len());
        for ch in rest.chars() {
            let (a, b) = match ch {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                other => return Err(syntax(format!("unexpected Pauli letter `{other}`"))),
            };
            x.push(a);
            z.push(b);
        }
        let p = PauliString { x, z, r: 0 };
        let r = (k + p.y_count()) % 4;
        Ok(p.with_xz_phase(r as u8))
    }
}

/// Images of every `X_q` and `Z_q` under conjugation by a Clifford.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliffordTableau {
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        Self {
            x_images: (0..n).map(|q| PauliString::single_x(n, q)).collect(),
            z_images: (0..n).map(|q| PauliString::single_z(n, q)).collect(),
        }
    }

    /// Tableau of the circuit applying `gates` in order.
    pub fn from_gates(n: usize, gates: &[CliffordGate]) -> Result<Self> {
        let mut t = Self::identity(n);
        for g in gates {
            t.apply_gate(g)?;
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.x_images.len()
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.z_images[q]
    }

    /// Appends `gate` after the current circuit.
    pub fn apply_gate(&mut self, gate: &CliffordGate) -> Result<()> {
        for p in self.x_images.iter_mut().chain(self.z_images.iter_mut()) {
            p.apply_clifford(gate)?;
        }
        Ok(())
    }

    /// `U · p · U†`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        let n = self.num_qubits();
        if p.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.num_qubits(),
            });
        }
        let mut out = PauliString::identity(n).with_xz_phase(p.xz_phase());
        for q in (0..n).filter(|&q| p.x[q]) {
            out = out.mul(&self.x_images[q])?;
        }
        for q in (0..n).filter(|&q| p.z[q]) {
            out = out.mul(&self.z_images[q])?;
        }
        Ok(out)
    }

    /// Tableau of `first` followed by `second`.
    pub fn compose(first: &CliffordTableau, second: &CliffordTableau) -> Result<CliffordTableau> {
        let map = |imgs: &[PauliString]| -> Result<Vec<PauliString>> {
            imgs.iter().map(|p| second.conjugate(p)).collect()
        };
        Ok(CliffordTableau {
            x_images: map(&first.x_images)?,
            z_images: map(&first.z_images)?,
        })
    }

    /// Images satisfy the canonical commutation relations and are Hermitian.
    pub fn is_valid(&self) -> bool {
        let n = self.num_qubits();
        let hermitian = |p: &PauliString| p.literal_phase().is_multiple_of(2);
        if !self.x_images.iter().chain(&self.z_images).all(hermitian) {
            return false;
        }
        for a in 0..n {
            for b in 0..n {
                let xx = self.x_images[a]
                    .commutes_with(&self.x_images[b])
                    .unwrap_or(false);
                let zz = self.z_images[a]
                    .commutes_with(&self.z_images[b])
                    .unwrap_or(false);
                let xz = self.x_images[a]
                    .commutes_with(&self.z_images[b])
                    .unwrap_or(false);
                if !xx || !zz || xz == (a == b) {
                    return false;
                }
            }
        }
        true
    }
}

/// Per-qubit symbolic Pauli correction `X^{x_q} Z^{z_q}` (phases dropped).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicPauliFrame {
    pub x: Vec<FrameForm>,
    pub z: Vec<FrameForm>,
}

impl SymbolicPauliFrame {
    pub fn new(n: usize) -> Self {
        Self {
            x: vec![FrameForm::zero(); n],
            z: vec![FrameForm::zero(); n],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    /// Pushes the frame through a Clifford gate, `G P = P' G`.
    pub fn apply_clifford(&mut self, gate: &CliffordGate) -> Result<()> {
        gate.check(self.num_qubits())?;
        match *gate {
            CliffordGate::H(q) => std::mem::swap(&mut self.x[q], &mut self.z[q]),
            CliffordGate::S(q) | CliffordGate::Sdg(q) => {
                let x = self.x[q].clone();
                self.z[q].xor_assign(&x);
            }
            CliffordGate::X(_) | CliffordGate::Y(_) | CliffordGate::Z(_) => {}
            CliffordGate::Cnot(ctl, tgt) => {
                let x = self.x[ctl].clone();
                self.x[tgt].xor_assign(&x);
                let z = self.z[tgt].clone();
                self.z[ctl].xor_assign(&z);
            }
            CliffordGate::Cz(a, b) => {
                let xa = self.x[a].clone();
                let xb = self.x[b].clone();
                self.z[a].xor_assign(&xb);
                self.z[b].xor_assign(&xa);
            }
            CliffordGate::Swap(a, b) => {
                self.x.swap(a, b);
                self.z.swap(a, b);
            }
        }
        Ok(())
    }

    /// Pushes the frame through the Clifford described by `tableau`.
    pub fn conjugate(&self, tableau: &CliffordTableau) -> Result<SymbolicPauliFrame> {
        let n = self.num_qubits();
        if tableau.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: tableau.num_qubits(),
            });
        }
        let mut out = SymbolicPauliFrame::new(n);
        for q in 0..n {
            for (form, img) in [
                (&self.x[q], tableau.x_image(q)),
                (&self.z[q], tableau.z_image(q)),
            ] {
                if form.is_zero() {
                    continue;
                }
                for j in 0..n {
                    if img.x_bits()[j] {
                        out.x[j].xor_assign(form);
                    }
                    if img.z_bits()[j] {
                        out.z[j].xor_assign(form);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Concrete Pauli (phase `+`, in `X^x Z^z` form) under an assignment.
    pub fn evaluate(&self, assign: &impl Fn(Var) -> bool) -> PauliString {
        PauliString {
            x: self.x.iter().map(|f| f.evaluate(assign)).collect(),
            z: self.z.iter().map(|f| f.evaluate(assign)).collect(),
            r: 0,
        }
    }

    pub fn is_affine(&self) -> bool {
        self.x.iter().chain(&self.z).all(FrameForm::is_affine)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix_distance;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn parse_format_round_trip() {
        for s in ["+XIZ", "-iYY", "+iX", "-ZZY", "+III", "-Y"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert!("XZ".parse::<PauliString>().is_err());
        assert!("+XQ".parse::<PauliString>().is_err());
    }

    #[test]
    fn products_match_matrices() {
        let cases = [
            ("+XI", "+ZI"),
            ("+Y", "+X"),
            ("-iYZ", "+XY"),
            ("+ZZ", "+XX"),
        ];
        for (a, b) in cases {
            let prod = p(a).mul(&p(b)).unwrap();
            let dense = p(a).to_matrix() * p(b).to_matrix();
            assert!((prod.to_matrix() - dense).norm() < 1e-12, "{a} * {b}");
        }
        assert_eq!(p("+X").mul(&p("+Z")).unwrap().to_string(), "-iY");
    }

    #[test]
    fn commutation() {
        assert!(p("+XX").commutes_with(&p("+ZZ")).unwrap());
        assert!(!p("+XI").commutes_with(&p("+ZI")).unwrap());
        assert!(p("+XI").commutes_with(&p("+XX")).is_ok());
        assert!(p("+X").commutes_with(&p("+XX")).is_err());
    }

    #[test]
    fn single_gate_rules() {
        let mut x = p("+X");
        x.apply_clifford(&CliffordGate::H(0)).unwrap();
        assert_eq!(x.to_string(), "+Z");
        let mut y = p("+Y");
        y.apply_clifford(&CliffordGate::H(0)).unwrap();
        assert_eq!(y.to_string(), "-Y");
        let mut x = p("+X");
        x.apply_clifford(&CliffordGate::S(0)).unwrap();
        assert_eq!(x.to_string(), "+Y");
        let mut xi = p("+XI");
        xi.apply_clifford(&CliffordGate::Cnot(0, 1)).unwrap();
        assert_eq!(xi.to_string(), "+XX");
    }

    #[test]
    fn tableau_is_valid_and_composes() {
        let gates = [
            CliffordGate::H(0),
            CliffordGate::Cnot(0, 1),
            CliffordGate::S(1),
        ];
        let t = CliffordTableau::from_gates(2, &gates).unwrap();
        assert!(t.is_valid());
        let a = CliffordTableau::from_gates(2, &gates[..1]).unwrap();
        let b = CliffordTableau::from_gates(2, &gates[1..]).unwrap();
        assert_eq!(CliffordTableau::compose(&a, &b).unwrap(), t);
        let q = p("-iYZ");
        let dense = q.to_matrix();
        let image = t.conjugate(&q).unwrap();
        // H on qubit 0, CNOT, S on qubit 1, as a matrix
        let i = c(0.0, 1.0);
        let h =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)])
                / c(2f64.sqrt(), 0.0);
        let s = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), i]);
        let id = CMatrix::identity(2, 2);
        let mut cnot = CMatrix::zeros(4, 4);
        for b in 0..4usize {
            let out = if b & 1 == 1 { b ^ 2 } else { b };
            cnot[(out, b)] = c(1.0, 0.0);
        }
        let u = kron(&s, &id) * cnot * kron(&id, &h);
        let expected = &u * dense * u.adjoint();
        assert!(matrix_distance(&image.to_matrix(), &expected) < 1e-9);
        assert!((image.to_matrix() - expected).norm() < 1e-9);
    }

    #[test]
    fn frame_through_tableau_matches_gatewise() {
        let gates = [
            CliffordGate::H(0),
            CliffordGate::Cnot(0, 2),
            CliffordGate::Cz(1, 2),
            CliffordGate::S(1),
            CliffordGate::Swap(0, 1),
        ];
        let mut frame = SymbolicPauliFrame::new(3);
        frame.x[0] = FrameForm::var(Var::Alice(0));
        frame.z[1] = FrameForm::var(Var::Bob(0));
        frame.x[2] = FrameForm::var(Var::Outcome(0));
        let tableau = CliffordTableau::from_gates(3, &gates).unwrap();
        let via_tableau = frame.conjugate(&tableau).unwrap();
        for g in &gates {
            frame.apply_clifford(g).unwrap();
        }
        for bits in 0..8u32 {
            let asg = |v: Var| match v {
                Var::Alice(_) => bits & 1 == 1,
                Var::Bob(_) => bits & 2 == 2,
                Var::Outcome(_) => bits & 4 == 4,
            };
            assert_eq!(frame.evaluate(&asg), via_tableau.evaluate(&asg));
        }
    }
}
