//! Passive states and ergotropy of the 4×4 active density matrix
//!
//! ```text
//! | rho11 rho12   0     0   |
//! | rho12 rho11   0     0   |
//! |   0     0   rhobb   0   |
//! |   0     0     0   rhoaa |
//! ```
//!
//! in the ascending energy basis `(eps1, eps2, eps_b, eps_a)`. The upper-left
//! block has eigenvalues `rho11 ± |rho12|` (the quasiprobabilities), so the
//! passive state is obtained by sorting four numbers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dynamics::{steady_state, StateVector};
use crate::engine::{build_generator, EngineParams};
use crate::error::{Error, Result};

/// Eigenvalue labels of the active matrix. Declaration order is the
/// tie-break precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Plus,
    Minus,
    Bb,
    Aa,
}

impl Label {
    pub const PRECEDENCE: [Label; 4] = [Label::Plus, Label::Minus, Label::Bb, Label::Aa];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Plus => "+",
            Label::Minus => "-",
            Label::Bb => "bb",
            Label::Aa => "aa",
        }
    }
}

impl FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Label::Plus),
            "-" | "minus" => Ok(Label::Minus),
            "bb" => Ok(Label::Bb),
            "aa" => Ok(Label::Aa),
            other => Err(Error::Domain(format!("unknown eigenvalue label `{other}`"))),
        }
    }
}

/// Descending order of the four eigenvalues, as labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature(pub [Label; 4]);

impl Signature {
    /// `(+, -, bb, aa)`: passive already when `eps1 = eps2`.
    pub const GIBBSIAN: Signature = Signature(Label::PRECEDENCE);

    /// Number of adjacent transpositions separating two signatures (Kendall tau distance).
    pub fn distance(&self, other: &Signature) -> usize {
        let pos = |s: &Signature, l: Label| s.0.iter().position(|&x| x == l).unwrap();
        let mut d = 0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let (a, b) = (self.0[i], self.0[j]);
                if pos(other, a) > pos(other, b) {
                    d += 1;
                }
            }
        }
        d
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|l| l.as_str()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Signature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let labels: Vec<Label> = s.split(',').map(|p| p.trim().parse()).collect::<Result<_>>()?;
        let arr: [Label; 4] =
            labels.try_into().map_err(|_| Error::Domain(format!("signature `{s}` must have four labels")))?;
        let mut sorted = arr;
        sorted.sort();
        if sorted != Label::PRECEDENCE {
            return Err(Error::Domain(format!("signature `{s}` is not a permutation")));
        }
        Ok(Signature(arr))
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let names: Vec<&str> = self.0.iter().map(|l| l.as_str()).collect();
        names.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let names: Vec<String> = Vec::deserialize(deserializer)?;
        names.join(",").parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActiveSpectrum {
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub rhoaa: f64,
    pub rhobb: f64,
    pub source: StateVector,
}

impl ActiveSpectrum {
    pub fn new(state: &StateVector) -> Self {
        let (rho_plus, rho_minus) = quasiprobabilities(state);
        ActiveSpectrum { rho_plus, rho_minus, rhoaa: state.rhoaa, rhobb: state.rhobb, source: *state }
    }

    pub fn value(&self, label: Label) -> f64 {
        match label {
            Label::Plus => self.rho_plus,
            Label::Minus => self.rho_minus,
            Label::Bb => self.rhobb,
            Label::Aa => self.rhoaa,
        }
    }
}

/// `(rho11 + |rho12|, rho11 - |rho12|)`.
pub fn quasiprobabilities(state: &StateVector) -> (f64, f64) {
    let c = state.rho12.abs();
    (state.rho11 + c, state.rho11 - c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PassiveState {
    /// Non-increasing.
    pub values: [f64; 4],
    pub signature: Signature,
    /// `(eps1, eps2, eps_b, eps_a)`
    pub energies: [f64; 4],
}

impl PassiveState {
    pub fn energy(&self) -> f64 {
        self.values.iter().zip(&self.energies).map(|(p, e)| p * e).sum()
    }
}

pub fn passive_state(state: &StateVector, params: &EngineParams) -> PassiveState {
    let spec = ActiveSpectrum::new(state);
    let mut labels = Label::PRECEDENCE;
    // stable sort keeps precedence order on ties
    labels.sort_by(|a, b| spec.value(*b).total_cmp(&spec.value(*a)));
    PassiveState { values: labels.map(|l| spec.value(l)), signature: Signature(labels), energies: params.energies() }
}

/// `<H>` in the active state.
pub fn active_energy(state: &StateVector, params: &EngineParams) -> f64 {
    (params.eps1 + params.eps2) * state.rho11 + params.eps_b * state.rhobb + params.eps_a * state.rhoaa
}

/// Active energy minus passive energy.
pub fn ergotropy_general(state: &StateVector, params: &EngineParams) -> f64 {
    active_energy(state, params) - passive_state(state, params).energy()
}

/// Hand-derived case expressions for particular passive orders, evaluated as
/// written. `None` for orders without such an expression.
pub fn ergotropy_closed_form(signature: &Signature, state: &StateVector, params: &EngineParams) -> Option<f64> {
    use Label::*;
    let (e1, eb, ea) = (params.eps1, params.eps_b, params.eps_a);
    let StateVector { rho11, rhoaa, rhobb, rho12, .. } = *state;
    let (_, rho_m) = quasiprobabilities(state);
    match signature.0 {
        [Plus, Bb, Minus, Aa] => {
            Some(ea * (rhobb - rhoaa) + e1 * (rho11 - rhobb - rho12) + eb * (rhoaa + rho12 - rho11))
        }
        [Plus, Minus, Aa, Bb] => Some(e1 * (rhoaa - rhobb)),
        [Plus, Aa, Minus, Bb] => Some((e1 - eb) * (rho11 - rhoaa - rho12)),
        [Plus, Aa, Bb, Minus] => {
            Some(eb * (rhoaa - rhobb) + e1 * (rho11 - rhoaa - rho12) + ea * (rhoaa + rho12 - rho11))
        }
        [Plus, Bb, Aa, Minus] => Some((ea - e1) * (rhobb - rho_m)),
        _ => None,
    }
}

/// E0 below this is treated as zero and the ratio E/E0 is not reported.
pub const E0_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgotropyReport {
    pub ergotropy: f64,
    pub e0: f64,
    pub ratio: Option<f64>,
    pub signature: Signature,
    pub closed_form: Option<f64>,
    pub closed_form_gap: Option<f64>,
}

/// Ergotropy of the steady state with both coherence parameters off.
pub fn incoherent_ergotropy(params: &EngineParams) -> Result<f64> {
    let p0 = params.incoherent();
    let state = steady_state(&build_generator(&p0)?)?;
    Ok(ergotropy_general(&state, &p0))
}

/// Report for an already-solved state; `e0` supplied by the caller.
pub fn report_for_state(state: &StateVector, params: &EngineParams, e0: f64) -> ErgotropyReport {
    let ergotropy = ergotropy_general(state, params);
    let signature = passive_state(state, params).signature;
    let closed_form = ergotropy_closed_form(&signature, state, params);
    ErgotropyReport {
        ergotropy,
        e0,
        ratio: (e0 > E0_FLOOR).then(|| ergotropy / e0),
        signature,
        closed_form,
        closed_form_gap: closed_form.map(|c| (c - ergotropy).abs()),
    }
}

pub fn ergotropy_report(params: &EngineParams) -> Result<ErgotropyReport> {
    let state = steady_state(&build_generator(params)?)?;
    let e0 = incoherent_ergotropy(params)?;
    Ok(report_for_state(&state, params, e0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Label::*;

    fn sym(rho11: f64, rhoaa: f64, rhobb: f64, rho12: f64) -> StateVector {
        StateVector::new(rho11, rho11, rhoaa, rhobb, rho12)
    }

    #[test]
    fn quasiprobability_cases() {
        let (p, m) = quasiprobabilities(&sym(0.3, 0.2, 0.2, 0.1));
        assert!((p - 0.4).abs() < 1e-15 && (m - 0.2).abs() < 1e-15);
        assert_eq!(quasiprobabilities(&sym(0.3, 0.2, 0.2, 0.0)), (0.3, 0.3));
        let (p, m) = quasiprobabilities(&sym(0.1, 0.4, 0.4, 0.15));
        assert!((p - 0.25).abs() < 1e-15 && (m + 0.05).abs() < 1e-15);
        // negative coherence folds into the same pair
        assert_eq!(quasiprobabilities(&sym(0.3, 0.2, 0.2, -0.1)), quasiprobabilities(&sym(0.3, 0.2, 0.2, 0.1)));
    }

    #[test]
    fn negative_quasiprobability_is_last() {
        let ps = passive_state(&sym(0.1, 0.4, 0.4, 0.15), &EngineParams::default());
        assert_eq!(ps.signature.0[3], Minus);
    }

    #[test]
    fn maximally_mixed_state_is_passive() {
        let s = sym(0.25, 0.25, 0.25, 0.0);
        let ps = passive_state(&s, &EngineParams::default());
        assert_eq!(ps.signature, Signature::GIBBSIAN);
        assert_eq!(ergotropy_general(&s, &EngineParams::default()), 0.0);
    }

    #[test]
    fn gibbsian_order_has_zero_ergotropy() {
        let p = EngineParams::default();
        let s = sym(0.33, 0.13, 0.21, 0.02);
        assert_eq!(passive_state(&s, &p).signature, Signature::GIBBSIAN);
        assert!(ergotropy_general(&s, &p).abs() < 1e-15);
        assert_eq!(ergotropy_closed_form(&Signature::GIBBSIAN, &s, &p), None);
    }

    #[test]
    fn signature_text_round_trip() {
        let sig: Signature = "+,bb,-,aa".parse().unwrap();
        assert_eq!(sig, Signature([Plus, Bb, Minus, Aa]));
        assert_eq!(sig.to_string(), "+,bb,-,aa");
        assert!("+,+,bb,aa".parse::<Signature>().is_err());
        assert!("+,-,bb".parse::<Signature>().is_err());
        let json = serde_json::to_string(&sig).unwrap();
        assert_eq!(json, r#"["+","bb","-","aa"]"#);
        assert_eq!(serde_json::from_str::<Signature>(&json).unwrap(), sig);
    }

    #[test]
    fn signature_distance() {
        let a = Signature::GIBBSIAN;
        assert_eq!(a.distance(&a), 0);
        assert_eq!(a.distance(&"+,bb,-,aa".parse().unwrap()), 1);
        assert_eq!(a.distance(&"aa,bb,-,+".parse().unwrap()), 6);
    }

    #[test]
    fn closed_form_agrees_when_upper_populations_equal() {
        let p = EngineParams::default();
        let s = sym(0.35, 0.15, 0.15, 0.0);
        let sig = Signature([Plus, Minus, Aa, Bb]);
        assert_eq!(ergotropy_closed_form(&sig, &s, &p), Some(0.0));
    }

    #[test]
    fn closed_form_gap_for_upper_inversion() {
        // rhoaa > rhobb, order (+, -, aa, bb)
        let p = EngineParams::default();
        let s = sym(0.3, 0.22, 0.18, 0.01);
        let report = report_for_state(&s, &p, 0.0);
        assert_eq!(report.signature, Signature([Plus, Minus, Aa, Bb]));
        let d = s.rhoaa - s.rhobb;
        // rearrangement pairing gives (eps_a - eps_b) d; the case expression eps1 d
        assert!((report.ergotropy - (p.eps_a - p.eps_b) * d).abs() < 1e-15);
        let gap = (p.eps1 * d - (p.eps_a - p.eps_b) * d).abs();
        assert!((report.closed_form_gap.unwrap() - gap).abs() < 1e-15);
        assert_eq!(report.ratio, None);
    }

    #[test]
    fn closed_form_matches_general_for_rho_minus_bb_swap() {
        let p = EngineParams::default();
        // rho_minus < rhobb < rho_plus, rhoaa lowest
        let s = sym(0.3, 0.1, 0.28, 0.06);
        let sig = passive_state(&s, &p).signature;
        assert_eq!(sig, Signature([Plus, Bb, Minus, Aa]));
        let general = ergotropy_general(&s, &p);
        // pairing: rhobb <-> eps2, rho_minus <-> eps_b
        let expect = (p.eps_b - p.eps1) * (s.rhobb - (s.rho11 - s.rho12));
        assert!((general - expect).abs() < 1e-15);
        assert!(general > 0.0);
        assert!(ergotropy_closed_form(&sig, &s, &p).is_some());
    }

    #[test]
    fn report_ratio_is_one_without_coherence() {
        // occupations with an inverted incoherent steady state (dilute, n_c/n_h < 1/3)
        let p = EngineParams { p_c: 0.0, p_h: 0.0, ..EngineParams::default() }.with_occupations(0.001, 0.1);
        let r = ergotropy_report(&p).unwrap();
        assert!(r.e0 > 0.0);
        assert_eq!(r.ratio, Some(1.0));
    }

    #[test]
    fn incoherent_ergotropy_is_idempotent() {
        let p = EngineParams { p_c: 0.0, p_h: 0.0, ..Default::default() };
        let s = steady_state(&build_generator(&p).unwrap()).unwrap();
        assert_eq!(incoherent_ergotropy(&p).unwrap(), ergotropy_general(&s, &p));
    }

    /// Brute force over all 24 assignments of eigenvalues to energy levels.
    fn min_over_permutations(state: &StateVector, params: &EngineParams) -> f64 {
        let (p, m) = quasiprobabilities(state);
        let vals = [p, m, state.rhobb, state.rhoaa];
        let e = params.energies();
        let mut best = f64::INFINITY;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let idx = [a, b, c, d];
                        let mut seen = [false; 4];
                        idx.iter().for_each(|&i| seen[i] = true);
                        if seen.iter().all(|&x| x) {
                            let energy: f64 = (0..4).map(|k| vals[idx[k]] * e[k]).sum();
                            best = best.min(energy);
                        }
                    }
                }
            }
        }
        best
    }

    fn arb_case() -> impl Strategy<Value = (StateVector, EngineParams)> {
        (proptest::array::uniform3(0.0..1.0f64), -1.0..1.0f64, 0.0..0.3f64, 0.05..1.0f64, 0.05..2.0f64).prop_map(
            |(w, c, e1, db, da)| {
                let total = 2.0 * w[0] + w[1] + w[2] + 1e-9;
                let rho11 = w[0] / total;
                let rho12 = c * rho11;
                let s = StateVector::new(rho11, rho11, w[1] / total, w[2] / total, rho12);
                let p = EngineParams { eps1: e1, eps2: e1, eps_b: e1 + db, eps_a: e1 + db + da, ..Default::default() };
                (s, p)
            },
        )
    }

    proptest! {
        #[test]
        fn matches_permutation_oracle((s, p) in arb_case()) {
            let brute = active_energy(&s, &p) - min_over_permutations(&s, &p);
            prop_assert!((ergotropy_general(&s, &p) - brute).abs() <= 1e-12);
        }

        #[test]
        fn nonnegative((s, p) in arb_case()) {
            prop_assert!(ergotropy_general(&s, &p) >= -1e-12);
        }

        #[test]
        fn quasiprobabilities_are_block_eigenvalues((s, _) in arb_case()) {
            let (plus, minus) = quasiprobabilities(&s);
            prop_assert!((plus + minus - 2.0 * s.rho11).abs() <= 1e-15);
            let block = nalgebra::Matrix2::new(s.rho11, s.rho12, s.rho12, s.rho11);
            let mut eig: Vec<f64> = block.symmetric_eigenvalues().iter().copied().collect();
            eig.sort_by(|a, b| b.total_cmp(a));
            prop_assert!((eig[0] - plus).abs() <= 1e-14);
            prop_assert!((eig[1] - minus).abs() <= 1e-14);
            prop_assert!(plus >= minus);
        }

        #[test]
        fn passive_values_non_increasing((s, p) in arb_case()) {
            let ps = passive_state(&s, &p);
            prop_assert!(ps.values.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn gibbsian_order_gives_zero((s, p) in arb_case()) {
            if passive_state(&s, &p).signature == Signature::GIBBSIAN {
                prop_assert!(ergotropy_general(&s, &p).abs() <= 1e-13);
            }
        }
    }
}
