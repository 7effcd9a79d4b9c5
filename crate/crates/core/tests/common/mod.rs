//! Deterministic checks shared by the property and acceptance suites.
#![allow(dead_code)]

use cactus::cosets::{todd_coxeter, EnumConfig, Strategy};
use cactus::groups::{closure, regular_representation, sym_generator, wreath_group, FiniteGroupTable};
use cactus::homs::qn_consequence_check;
use cactus::permstruct::{lcs_terms, schreier_sims, schreier_sims_generic};
use cactus::presentations::{class_truncate, minimal_cactus, thmd_quotient, Presentation};
use cactus::words::{cyclic_canonical, hall_basic_commutators, Word};

pub type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn involutive_word(letters: &[u32]) -> Word {
    Word::from_gens(letters.iter().copied())
}

/// Every involutively reduced word over 4 letters up to length 12 has the
/// same canonical form as its one-step rotation and its inverse. Returns
/// the number of words visited.
pub fn canonical_rotation_inversion() -> Result<usize, String> {
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    let mut checked = 0usize;
    for _ in 1..=12 {
        let mut next = Vec::with_capacity(frontier.len() * 3);
        for w in &frontier {
            for g in 1..=4u32 {
                if w.last() == Some(&g) {
                    continue;
                }
                let mut v = w.clone();
                v.push(g);
                let word = involutive_word(&v);
                let c = cyclic_canonical(&word);
                let mut rotated = v[1..].to_vec();
                rotated.push(v[0]);
                ensure!(cyclic_canonical(&involutive_word(&rotated)) == c, "rotation of {v:?}");
                ensure!(cyclic_canonical(&word.inverse()) == c, "inverse of {v:?}");
                checked += 1;
                next.push(v);
            }
        }
        frontier = next;
    }
    Ok(checked)
}

/// Lyndon words of length `w` over `k` letters, counted by brute force.
pub fn lyndon_count(k: u32, w: usize) -> usize {
    let k = k as usize;
    (0..k.pow(w as u32))
        .filter(|&code| {
            let mut digits = vec![0usize; w];
            let mut c = code;
            for d in digits.iter_mut().rev() {
                *d = c % k;
                c /= k;
            }
            (1..w).all(|s| {
                let rot: Vec<usize> = digits[s..].iter().chain(&digits[..s]).copied().collect();
                digits < rot
            })
        })
        .count()
}

pub fn basic_commutator_counts() -> Check {
    for k in 1..=4u32 {
        for w in 1..=5usize {
            let got = hall_basic_commutators(k, w).len();
            let want = lyndon_count(k, w);
            ensure!(got == want, "k={k} w={w}: {got} basic commutators, {want} Lyndon words");
        }
    }
    Ok(())
}

/// Presentations of finite groups used for strategy and structure checks.
pub fn corpus() -> Vec<(String, Presentation)> {
    let w = |s: &str| s.parse::<Word>().unwrap();
    let rel = |r: &[&str]| Presentation::custom(2, r.iter().map(|s| w(s)).collect()).unwrap();
    let mut out = vec![
        ("s3".to_string(), rel(&["g1^2", "g2^2", "g1*g2*g1*g2*g1*g2"])),
        ("a5".to_string(), rel(&["g1^2", "g2^3", "g1*g2*g1*g2*g1*g2*g1*g2*g1*g2"])),
        ("q8".to_string(), rel(&["g1^4", "g1^2*g2^-2", "g2^-1*g1*g2*g1"])),
        ("trivial".to_string(), rel(&["g1", "g1*g2^2", "g2^5"])),
    ];
    for n in 3..=8 {
        out.push((format!("thmd{n}"), thmd_quotient(n).unwrap()));
    }
    for n in 3..=6 {
        for c in 1..=3 {
            out.push((format!("trunc{n}:{c}"), class_truncate(&minimal_cactus(n).unwrap(), c).unwrap()));
        }
    }
    out.push(("trunc4:4".to_string(), class_truncate(&minimal_cactus(4).unwrap(), 4).unwrap()));
    out
}

pub fn hlt_felsch_agree() -> Check {
    for (name, p) in corpus() {
        let hlt = todd_coxeter(&p, &[], &EnumConfig::with_strategy(Strategy::Hlt)).map_err(|e| format!("{name}: {e}"))?;
        let felsch = todd_coxeter(&p, &[], &EnumConfig::with_strategy(Strategy::Felsch)).map_err(|e| format!("{name}: {e}"))?;
        ensure!(hlt.is_complete() && felsch.is_complete(), "{name}: incomplete");
        ensure!(hlt.index() == felsch.index(), "{name}: HLT {} vs Felsch {}", hlt.index(), felsch.index());
    }
    Ok(())
}

pub fn small_groups() -> Vec<(String, FiniteGroupTable)> {
    let mut out: Vec<(String, FiniteGroupTable)> = vec![
        ("s4".into(), FiniteGroupTable::symmetric(4)),
        ("s5".into(), FiniteGroupTable::symmetric(5)),
        ("q8".into(), FiniteGroupTable::quaternion()),
        ("wreath".into(), wreath_group()),
        ("z2xwreath".into(), FiniteGroupTable::cyclic(2).direct_product(&wreath_group())),
        ("c12".into(), FiniteGroupTable::cyclic(12)),
    ];
    for m in [3, 8, 17, 64, 256] {
        out.push((format!("d{m}"), FiniteGroupTable::dihedral(m)));
    }
    let pair = FiniteGroupTable::new(6, vec![sym_generator(6, 1, 3).unwrap(), sym_generator(6, 3, 6).unwrap()]).unwrap();
    out.push(("s6-intervals".into(), pair));
    out
}

/// Schreier-Sims orders against exhaustive closure for every group of order
/// at most 512 among the named groups and the corpus.
pub fn bsgs_matches_closure() -> Check {
    let mut groups = small_groups();
    for (name, p) in corpus() {
        let t = todd_coxeter(&p, &[], &EnumConfig::default()).map_err(|e| format!("{name}: {e}"))?;
        if t.index() <= 512 {
            groups.push((name, regular_representation(&t).map_err(|e| e.to_string())?));
        }
    }
    for (name, g) in groups {
        let Ok(elements) = closure(g.degree(), g.gens(), 512) else { continue };
        for bsgs in [schreier_sims(g.degree(), g.gens()), schreier_sims_generic(g.degree(), g.gens())] {
            ensure!(bsgs.order() == elements.len() as u64, "{name}: BSGS {} vs closure {}", bsgs.order(), elements.len());
            ensure!(elements.iter().all(|e| bsgs.contains(e)), "{name}: element missing from BSGS");
        }
    }
    Ok(())
}

/// `Gamma_k(Z2 * Z2) = <(ab)^(2^(k-1))>` for `k >= 2`, seen in the finite
/// shadow `D_64` up to `k = 7`, where the term is trivial.
pub fn dihedral_lcs_shadow() -> Check {
    let d = FiniteGroupTable::dihedral(64);
    let g = schreier_sims(d.degree(), d.gens());
    let terms = lcs_terms(&g, None);
    let rotation = d.gens()[0].mul(&d.gens()[1]);
    ensure!(terms[0].order() == 128, "D_64 order {}", terms[0].order());
    ensure!(terms.len() >= 7, "only {} terms", terms.len());
    for k in 2..=7usize {
        let r = rotation.pow(1 << (k - 1));
        let expected = schreier_sims(d.degree(), std::slice::from_ref(&r));
        let term = &terms[k - 1];
        ensure!(term.order() == expected.order(), "k={k}: order {} vs {}", term.order(), expected.order());
        ensure!(term.contains(&r), "k={k}: (ab)^(2^(k-1)) missing");
    }
    ensure!(terms.last().unwrap().is_trivial(), "series does not reach 1");
    Ok(())
}

pub fn strand_forgetting() -> Check {
    for n in 4..=10 {
        let r = qn_consequence_check(n).map_err(|e| e.to_string())?;
        ensure!(r.passed, "n={n}: {:?}", r.failures);
    }
    Ok(())
}
