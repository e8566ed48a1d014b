//! CSV encodings of trajectories and sweeps.

use crate::analysis::Sweep;
use crate::dynamics::Trajectory;
use crate::ergotropy::quasiprobabilities;
use crate::error::Result;

use super::files::{fmt_f64, fmt_opt};

pub const TRAJECTORY_HEADER: [&str; 9] =
    ["t", "rho11", "rho22", "rhoaa", "rhobb", "rho12", "p_plus", "p_minus", "trace"];

pub const SWEEP_HEADER: [&str; 17] = [
    "var_name",
    "var_value",
    "p_c",
    "p_h",
    "rho11",
    "rhoaa",
    "rhobb",
    "rho12",
    "rho_plus",
    "rho_minus",
    "signature",
    "ergotropy",
    "e0",
    "ratio",
    "flux",
    "work",
    "power",
];

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| crate::error::Error::Config(format!("csv buffer: {e}")))
}

pub fn trajectory_csv(traj: &Trajectory) -> Result<Vec<u8>> {
    let mut w = writer();
    w.write_record(TRAJECTORY_HEADER)?;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let (p, m) = quasiprobabilities(s);
        w.write_record([*t, s.rho11, s.rho22, s.rhoaa, s.rhobb, s.rho12, p, m, s.trace()].map(fmt_f64))?;
    }
    finish(w)
}

/// Failed rows keep the point columns and leave the rest empty.
pub fn sweep_csv(sweep: &Sweep) -> Result<Vec<u8>> {
    let mut w = writer();
    w.write_record(SWEEP_HEADER)?;
    append_sweep_rows(&mut w, sweep)?;
    finish(w)
}

/// Several sweeps stacked under one header (distinguished by their `p_c`/`p_h` columns).
pub fn stacked_sweep_csv(sweeps: &[Sweep]) -> Result<Vec<u8>> {
    let mut w = writer();
    w.write_record(SWEEP_HEADER)?;
    for s in sweeps {
        append_sweep_rows(&mut w, s)?;
    }
    finish(w)
}

fn append_sweep_rows(w: &mut csv::Writer<Vec<u8>>, sweep: &Sweep) -> Result<()> {
    for row in &sweep.rows {
        let mut rec = vec![row.variable.name().to_string(), fmt_f64(row.value), fmt_f64(row.p_c), fmt_f64(row.p_h)];
        match row.data() {
            Some(d) => rec.extend([
                fmt_f64(d.state.rho11),
                fmt_f64(d.state.rhoaa),
                fmt_f64(d.state.rhobb),
                fmt_f64(d.state.rho12),
                fmt_f64(d.rho_plus),
                fmt_f64(d.rho_minus),
                d.signature.to_string(),
                fmt_f64(d.ergotropy),
                fmt_f64(d.e0),
                fmt_opt(d.ratio),
                fmt_f64(d.flux),
                fmt_opt(d.work),
                fmt_opt(d.power),
            ]),
            None => rec.extend(std::iter::repeat_n(String::new(), 13)),
        }
        w.write_record(&rec)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{sweep, SweepSpec, SweepVariable};
    use crate::dynamics::StateVector;
    use crate::engine::{EngineParams, GeneratorVariant};

    #[test]
    fn trajectory_layout() {
        let traj = Trajectory { times: vec![0.0, 0.5], states: vec![StateVector::default(); 2] };
        let text = String::from_utf8(trajectory_csv(&traj).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,rho11,rho22,rhoaa,rhobb,rho12,p_plus,p_minus,trace");
        assert_eq!(lines.len(), 3);
        assert!(text.ends_with('\n'));
        assert!(!text.contains('\r'));
        assert_eq!(lines[2].split(',').count(), 9);
    }

    #[test]
    fn sweep_layout_quotes_signature() {
        let p = EngineParams::default();
        let s = sweep(&p, &SweepSpec::new(SweepVariable::PHot, 0.0, 1.0, 3)).unwrap();
        let bytes = sweep_csv(&s).unwrap();
        let mut rdr = csv::Reader::from_reader(bytes.as_slice());
        assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), SWEEP_HEADER);
        let recs: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert_eq!(recs.len(), 3);
        assert_eq!(&recs[0][10], "+,-,bb,aa");
        assert_eq!(&recs[0][13], "", "ratio absent when E0 = 0");
        assert!(String::from_utf8(bytes).unwrap().contains("\"+,-,bb,aa\""));
    }

    #[test]
    fn failed_rows_have_empty_fields() {
        let p = EngineParams { variant: GeneratorVariant::Verbatim, ..Default::default() };
        let s = sweep(&p, &SweepSpec::new(SweepVariable::PHot, 0.0, 1.0, 2)).unwrap();
        let bytes = sweep_csv(&s).unwrap();
        let mut rdr = csv::Reader::from_reader(bytes.as_slice());
        for rec in rdr.records() {
            let rec = rec.unwrap();
            assert_eq!(&rec[0], "p_h");
            assert!(rec.iter().skip(4).all(|f| f.is_empty()));
        }
    }
}
