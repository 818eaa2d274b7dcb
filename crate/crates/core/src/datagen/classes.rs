use crate::cgr::Alphabet;
use crate::error::{Error, Result};

use super::rng::CounterRng;

/// How a class draws its symbols.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolModel {
    /// i.i.d. symbols; one probability per alphabet symbol, in alphabet order.
    Composition(Vec<f64>),
    /// One motif picked uniformly, repeated and cut to length.
    TandemRepeat(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassSpec {
    name: String,
    alphabet: Alphabet,
    length_min: usize,
    length_max: usize,
    model: SymbolModel,
}

impl ClassSpec {
    pub fn new(
        name: &str,
        alphabet: Alphabet,
        length_min: usize,
        length_max: usize,
        model: SymbolModel,
    ) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidClassSpec { name: name.to_string(), reason };
        if name.is_empty() || name.contains(['|', ',']) || name.chars().any(char::is_whitespace) {
            return Err(invalid("name must be non-empty without '|', ',' or whitespace".into()));
        }
        if length_min == 0 || length_min > length_max {
            return Err(invalid(format!("bad length range {length_min}..={length_max}")));
        }
        match &model {
            SymbolModel::Composition(probs) => {
                if probs.len() != alphabet.len() {
                    return Err(invalid(format!("{} probabilities for {} symbols", probs.len(), alphabet.len())));
                }
                if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
                    return Err(invalid("probabilities must be finite and non-negative".into()));
                }
                let total: f64 = probs.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(invalid(format!("probabilities sum to {total}")));
                }
            }
            SymbolModel::TandemRepeat(motifs) => {
                if motifs.is_empty() || motifs.iter().any(String::is_empty) {
                    return Err(invalid("need at least one non-empty motif".into()));
                }
                if let Some(c) = motifs.iter().flat_map(|m| m.chars()).find(|&c| !alphabet.contains(c)) {
                    return Err(invalid(format!("motif symbol {c:?} not in alphabet")));
                }
            }
        }
        Ok(Self { name: name.to_string(), alphabet, length_min, length_max, model })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn length_range(&self) -> (usize, usize) {
        (self.length_min, self.length_max)
    }

    pub fn model(&self) -> &SymbolModel {
        &self.model
    }

    /// Probability of `symbol` under a composition model.
    pub fn probability(&self, symbol: char) -> Option<f64> {
        match &self.model {
            SymbolModel::Composition(p) => self.alphabet.index(symbol).map(|i| p[i - 1]),
            SymbolModel::TandemRepeat(_) => None,
        }
    }
}

pub const DNA_LENGTHS: (usize, usize) = (50, 200);
pub const PROTEIN_LENGTHS: (usize, usize) = (30, 150);

pub const HYDROPHOBIC: &str = "AILMFWYV";
pub const HYDROPHILIC: &str = "RNDQEHKST";
pub const REPEAT_MOTIFS: [&str; 4] = ["ATCG", "GCTA", "TGCA", "CGAT"];

/// `enriched` symbols get `p_each`; the rest share the remaining mass evenly.
fn enriched(alphabet: &Alphabet, enriched: &str, p_each: f64) -> Vec<f64> {
    let n_rich = alphabet.symbols().iter().filter(|c| enriched.contains(**c)).count();
    let rest = (1.0 - p_each * n_rich as f64) / (alphabet.len() - n_rich) as f64;
    alphabet.symbols().iter().map(|c| if enriched.contains(*c) { p_each } else { rest }).collect()
}

/// The seven synthetic classes, in class-index order.
pub fn builtin_class_specs() -> Vec<ClassSpec> {
    let dna = Alphabet::dna();
    let protein = Alphabet::protein();
    let (dmin, dmax) = DNA_LENGTHS;
    let (pmin, pmax) = PROTEIN_LENGTHS;
    let comp = |probs: Vec<f64>| SymbolModel::Composition(probs);
    let build = |name, alphabet: &Alphabet, (lo, hi), model| {
        ClassSpec::new(name, alphabet.clone(), lo, hi, model).expect("builtin class spec")
    };
    vec![
        build("dna_random", &dna, (dmin, dmax), comp(vec![0.25; 4])),
        build("dna_at_rich", &dna, (dmin, dmax), comp(vec![0.4, 0.4, 0.1, 0.1])),
        build("dna_gc_rich", &dna, (dmin, dmax), comp(vec![0.1, 0.1, 0.4, 0.4])),
        build(
            "dna_repetitive",
            &dna,
            (dmin, dmax),
            SymbolModel::TandemRepeat(REPEAT_MOTIFS.iter().map(|m| m.to_string()).collect()),
        ),
        build("prot_hydrophobic", &protein, (pmin, pmax), comp(enriched(&protein, HYDROPHOBIC, 0.08))),
        build("prot_hydrophilic", &protein, (pmin, pmax), comp(enriched(&protein, HYDROPHILIC, 0.08))),
        build("prot_mixed", &protein, (pmin, pmax), comp(vec![0.05; 20])),
    ]
}

/// Draws one sequence: the length first, then the symbols.
pub fn gen_sequence(spec: &ClassSpec, rng: &mut CounterRng) -> String {
    let len = rng.range_inclusive(spec.length_min as u64, spec.length_max as u64) as usize;
    match &spec.model {
        SymbolModel::Composition(probs) => {
            let mut cdf = Vec::with_capacity(probs.len());
            let mut acc = 0.0;
            for p in probs {
                acc += p;
                cdf.push(acc);
            }
            // Rounding can leave the last cumulative value a hair below 1.
            let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1);
            let symbols = spec.alphabet.symbols();
            (0..len)
                .map(|_| {
                    let u = rng.unit();
                    let i = cdf.iter().position(|&c| u < c).unwrap_or(last);
                    symbols[i]
                })
                .collect()
        }
        SymbolModel::TandemRepeat(motifs) => {
            let motif = &motifs[rng.below(motifs.len() as u64) as usize];
            motif.chars().cycle().take(len).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(name: &str) -> ClassSpec {
        builtin_class_specs().into_iter().find(|s| s.name() == name).unwrap()
    }

    #[test]
    fn seven_classes_with_expected_tables() {
        let specs = builtin_class_specs();
        let names: Vec<_> = specs.iter().map(ClassSpec::name).collect();
        assert_eq!(
            names,
            [
                "dna_random",
                "dna_at_rich",
                "dna_gc_rich",
                "dna_repetitive",
                "prot_hydrophobic",
                "prot_hydrophilic",
                "prot_mixed"
            ]
        );
        let at = spec("dna_at_rich");
        assert_eq!([at.probability('A'), at.probability('T'), at.probability('G')], [Some(0.4), Some(0.4), Some(0.1)]);
        let gc = spec("dna_gc_rich");
        assert_eq!([gc.probability('G'), gc.probability('C'), gc.probability('A')], [Some(0.4), Some(0.4), Some(0.1)]);
        let phob = spec("prot_hydrophobic");
        for c in HYDROPHOBIC.chars() {
            assert_eq!(phob.probability(c), Some(0.08));
        }
        assert!((phob.probability('R').unwrap() - 0.03).abs() < 1e-15);
        let phil = spec("prot_hydrophilic");
        for c in HYDROPHILIC.chars() {
            assert_eq!(phil.probability(c), Some(0.08));
        }
        assert!((phil.probability('A').unwrap() - 0.28 / 11.0).abs() < 1e-15);
        assert_eq!(spec("prot_mixed").probability('W'), Some(0.05));
        assert_eq!(spec("dna_random").length_range(), (50, 200));
        assert_eq!(phob.length_range(), (30, 150));
        for s in &specs {
            if let SymbolModel::Composition(p) = s.model() {
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn spec_validation() {
        let dna = Alphabet::dna();
        assert!(ClassSpec::new("x", dna.clone(), 5, 4, SymbolModel::Composition(vec![0.25; 4])).is_err());
        assert!(ClassSpec::new("x", dna.clone(), 1, 4, SymbolModel::Composition(vec![0.3; 4])).is_err());
        assert!(ClassSpec::new("x", dna.clone(), 1, 4, SymbolModel::Composition(vec![0.5; 2])).is_err());
        assert!(ClassSpec::new("x", dna.clone(), 1, 4, SymbolModel::TandemRepeat(vec!["AXG".into()])).is_err());
        assert!(ClassSpec::new("a|b", dna.clone(), 1, 4, SymbolModel::Composition(vec![0.25; 4])).is_err());
        assert!(ClassSpec::new("ok", dna, 1, 4, SymbolModel::TandemRepeat(vec!["GATC".into()])).is_ok());
    }

    #[test]
    fn truncated_tandem_repeat() {
        let only =
            ClassSpec::new("r", Alphabet::dna(), 10, 10, SymbolModel::TandemRepeat(vec!["ATCG".into()])).unwrap();
        assert_eq!(gen_sequence(&only, &mut CounterRng::from_key(9)), "ATCGATCGAT");
    }

    #[test]
    fn sequences_respect_class_constraints() {
        for (ci, s) in builtin_class_specs().iter().enumerate() {
            let (lo, hi) = s.length_range();
            for ri in 0..200 {
                let seq = gen_sequence(s, &mut CounterRng::substream(7, ci as u64, ri));
                assert!((lo..=hi).contains(&seq.len()));
                assert!(seq.chars().all(|c| s.alphabet().contains(c)));
            }
        }
    }

    #[test]
    fn repetitive_sequences_are_motif_prefixes() {
        let s = spec("dna_repetitive");
        for ri in 0..300 {
            let seq = gen_sequence(&s, &mut CounterRng::substream(42, 3, ri));
            assert!(REPEAT_MOTIFS.iter().any(|m| m.repeat(50).starts_with(&seq)), "{seq}");
        }
    }
}
