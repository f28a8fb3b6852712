use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use super::{CodingBackend, CodingParams, HoroCoding, HorofunctionPatch};
use crate::error::{Error, Result};
use crate::group::{BallTable, Element, Group};
use crate::sft::{Sft, Symbol};

/// Patches of the cocycles c_g = d(·, g) − d(1, g) on the R₀-neighbourhood
/// of the first L₀ steps of the least geodesic from 1 to g, for g on a
/// sphere. The patch set is accepted once two consecutive radii agree.
pub struct GenericPatches;

type Sample = (
    BTreeSet<HorofunctionPatch>,
    BTreeSet<(HorofunctionPatch, HorofunctionPatch)>,
);

impl CodingBackend for GenericPatches {
    fn name(&self) -> &'static str {
        "generic"
    }

    fn supports(&self, _group: &Group) -> bool {
        true
    }

    fn build(&self, group: &Group, params: &CodingParams) -> Result<HoroCoding> {
        let (r0, l0) = (params.r0, params.l0);
        let r_stab = params.r_stab.unwrap_or(l0 + 2 * r0 + 2);
        if r_stab < l0 + r0 + 2 {
            return Err(Error::input(format!(
                "stabilization radius {r_stab} must be at least L0 + R0 + 2 = {}",
                l0 + r0 + 2
            )));
        }
        let table = BallTable::build(group, r_stab)?;
        let (pa, wa) = sample(group, &table, r_stab - 1, r0, l0);
        let (pb, wb) = sample(group, &table, r_stab, r0, l0);
        if pa != pb {
            let odd = pa.symmetric_difference(&pb).next().expect("sets differ");
            return Err(Error::Unstable {
                radius: r_stab,
                detail: describe(group, odd),
            });
        }
        if wa != wb {
            let (p, q) = wa.symmetric_difference(&wb).next().expect("sets differ");
            return Err(Error::Unstable {
                radius: r_stab,
                detail: format!("transition {} → {}", describe(group, p), describe(group, q)),
            });
        }
        let gens = group.generators();
        let mut keyed: Vec<(u32, HorofunctionPatch)> = pb
            .into_iter()
            .map(|p| {
                let a = p.first_letter(group).ok_or_else(|| {
                    Error::Consistency(format!("no descent in {}", describe(group, &p)))
                })?;
                Ok((gens.rank(a), p))
            })
            .collect::<Result<_>>()?;
        keyed.sort();
        let patches: Vec<HorofunctionPatch> = keyed.into_iter().map(|(_, p)| p).collect();
        let index: BTreeMap<&HorofunctionPatch, Symbol> = patches
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i as Symbol))
            .collect();
        let allowed = wb.iter().map(|(p, q)| vec![index[p], index[q]]).collect();
        let theta = patches
            .iter()
            .map(|p| p.first_letter(group).expect("checked above"))
            .collect();
        let names = (0..patches.len()).map(|i| format!("p{i}")).collect();
        let certified = group
            .hyperbolicity()
            .is_some_and(|d| r0 > 100 * d as usize && l0 > 2 * r0 + 32 * d as usize);
        Ok(HoroCoding {
            group: group.clone(),
            backend: self.name().to_string(),
            params: CodingParams {
                r_stab: Some(r_stab),
                ..*params
            },
            certified,
            sft: Sft::new(names, 2, allowed)?,
            patches,
            theta,
            layers: None,
        })
    }
}

fn sample(group: &Group, table: &BallTable, r: usize, r0: usize, l0: usize) -> Sample {
    let gens = group.generators();
    let pairs: Vec<(HorofunctionPatch, HorofunctionPatch)> = table
        .sphere(r)
        .par_iter()
        .zip(table.sphere_words(r).par_iter())
        .map(|(g, w)| {
            let first = patch(group, g, w, r0, l0);
            let back = group.mul(&group.gen(gens.inverse(w[0])), g);
            (first, patch(group, &back, &w[1..], r0, l0))
        })
        .collect();
    let patches = pairs.iter().map(|(p, _)| p.clone()).collect();
    (patches, pairs.into_iter().collect())
}

fn patch(group: &Group, g: &Element, word: &[u16], r0: usize, l0: usize) -> HorofunctionPatch {
    let mut path = vec![group.identity()];
    for &a in &word[..l0.min(word.len())] {
        let next = group.mul(path.last().unwrap(), &group.gen(a));
        path.push(next);
    }
    let mut seen: HashSet<Element> = path.iter().cloned().collect();
    let mut frontier = path;
    for _ in 0..r0 {
        let mut next = Vec::new();
        for x in &frontier {
            for a in 0..group.rank() as u16 {
                let y = group.mul(x, &group.gen(a));
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    let base = group.word_length(g) as i64;
    HorofunctionPatch::new(
        seen.into_iter()
            .map(|x| {
                let v = group.distance(&x, g) as i64 - base;
                (x, v)
            })
            .collect(),
    )
}

fn describe(group: &Group, p: &HorofunctionPatch) -> String {
    let lowest = p.values.iter().copied().min().unwrap_or(0);
    let at: Vec<String> = p
        .domain
        .iter()
        .zip(&p.values)
        .filter(|(_, &v)| v == lowest)
        .map(|(x, _)| group.format(x))
        .collect();
    format!(
        "patch on {} points, lowest at {}",
        p.domain.len(),
        at.join(",")
    )
}
