//! Category laws for correspondences and functoriality of constructed functors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{run_report, SweepConfig, VerificationReport};
use crate::functors::FunctorRep;
use crate::relations::{enumerate_correspondences, Correspondence};
use crate::sweep::run_cases;

fn all(y: usize, x: usize) -> Vec<Correspondence> {
    enumerate_correspondences(y, x).expect("small").collect()
}

/// `(W∘V)∘U = W∘(V∘U)` for every triple over every signature of sizes `≤ 2`,
/// `Δ∘U = U = U∘Δ` for every `U` there, then random triples with a set of size 3.
pub fn verify_composition_laws(cfg: &SweepConfig) -> VerificationReport {
    run_report("composition-laws", String::new(), 3, |tally| {
        let sizes = 0..=2usize;
        for w in sizes.clone() {
            for z in sizes.clone() {
                let ws = all(w, z);
                for y in sizes.clone() {
                    let vs = all(z, y);
                    for x in sizes.clone() {
                        let us = all(y, x);
                        let triples: Vec<(usize, usize, usize)> = (0..ws.len() * vs.len() * us.len())
                            .map(|k| (k / (vs.len() * us.len()), k / us.len() % vs.len(), k % us.len()))
                            .collect();
                        run_cases(cfg.exec, &triples, |&(a, b, c)| {
                            let (wr, vr, ur) = (&ws[a], &vs[b], &us[c]);
                            let left = wr.compose(vr).and_then(|p| p.compose(ur));
                            let right = vr.compose(ur).and_then(|p| wr.compose(&p));
                            if left.map_err(|e| e.to_string())? == right.map_err(|e| e.to_string())? {
                                Ok(())
                            } else {
                                Err(format!("(W∘V)∘U ≠ W∘(V∘U) for W={wr:?}, V={vr:?}, U={ur:?}"))
                            }
                        })
                        .map_err(|(_, w)| w)?;
                        tally.exhaustive(triples.len());
                    }
                }
                for u in &ws {
                    let l = Correspondence::identity(w).compose(u).map_err(|e| e.to_string())?;
                    let r = u.compose(&Correspondence::identity(z)).map_err(|e| e.to_string())?;
                    if l != *u || r != *u {
                        return Err(format!("identity law fails for {u:?}"));
                    }
                }
                tally.exhaustive(ws.len());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.samples {
            let mut s = [0usize; 4].map(|_| rng.gen_range(0..=3));
            s[rng.gen_range(0..4)] = 3;
            let wr = Correspondence::random(s[0], s[1], &mut rng);
            let vr = Correspondence::random(s[1], s[2], &mut rng);
            let ur = Correspondence::random(s[2], s[3], &mut rng);
            let left = wr.compose(&vr).and_then(|p| p.compose(&ur)).map_err(|e| e.to_string())?;
            let right = wr.compose(&vr.compose(&ur).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            if left != right {
                return Err(format!("(W∘V)∘U ≠ W∘(V∘U) for W={wr:?}, V={vr:?}, U={ur:?}"));
            }
            if Correspondence::identity(s[0]).compose(&wr).map_err(|e| e.to_string())? != wr {
                return Err(format!("identity law fails for {wr:?}"));
            }
        }
        tally.count.random += cfg.samples;
        Ok(())
    })
}

/// `act(V∘U) = act(V)·act(U)` and `act(Δ) = I` over the sweep plan.
pub fn verify_functoriality(m: &FunctorRep, cfg: &SweepConfig) -> VerificationReport {
    run_report("functoriality", m.describe().replace(' ', ""), m.bound(), |tally| {
        tally.add(m.check_functoriality(&cfg.plan(m.bound()), cfg.exec)?);
        Ok(())
    })
}
