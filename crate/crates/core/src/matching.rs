//! Monomorphism enumeration between finite presheaves.
//!
//! The search assigns pattern elements one at a time. The order is fixed up
//! front: an element whose image is already determined by an assigned element
//! above it comes first, then elements hanging off an assigned face (their
//! candidates are a fiber in the target), then unconstrained elements of the
//! object with the most incident generators. Results are sorted afterwards,
//! so the order never shows in the output.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::morphism::PresheafMorphism;
use crate::presheaf::Presheaf;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Mono,
    Iso,
}

/// `fibers[g][x]`: elements `y` over `dst(g)` with `act_g(y) = x`.
fn fibers(p: &Presheaf) -> Vec<Vec<Vec<usize>>> {
    let base = p.base();
    base.generators()
        .iter()
        .enumerate()
        .map(|(g, gen)| {
            let mut f = vec![Vec::new(); p.size(gen.src)];
            for y in 0..p.size(gen.dst) {
                f[p.act(g, y)].push(y);
            }
            f
        })
        .collect()
}

enum Source {
    Seed(usize),
    /// Image is `act_g(image(y))` for an element `y` placed earlier.
    Forced {
        g: usize,
        y: usize,
    },
    /// Candidates are the target fiber of `g` over `image(x)`.
    Fiber {
        g: usize,
        x: usize,
    },
    Free,
}

struct Step {
    obj: usize,
    elem: usize,
    source: Source,
}

struct Matcher<'a> {
    pattern: &'a Presheaf,
    target: &'a Presheaf,
    mode: Mode,
    pattern_fibers: Vec<Vec<Vec<usize>>>,
    target_fibers: Vec<Vec<Vec<usize>>>,
    steps: Vec<Step>,
    image: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
}

const UNSET: usize = usize::MAX;

impl<'a> Matcher<'a> {
    fn new(pattern: &'a Presheaf, target: &'a Presheaf, mode: Mode, seeds: &[(usize, usize, usize)]) -> Self {
        let base = pattern.base();
        let n_obj = base.objects().len();
        let pattern_fibers = fibers(pattern);
        let target_fibers = fibers(target);

        let mut placed: Vec<Vec<bool>> = (0..n_obj).map(|o| vec![false; pattern.size(o)]).collect();
        let mut steps = Vec::with_capacity(pattern.total_size());
        for &(o, x, y) in seeds {
            if !placed[o][x] {
                placed[o][x] = true;
                steps.push(Step { obj: o, elem: x, source: Source::Seed(y) });
            }
        }
        let incidence: Vec<usize> =
            (0..n_obj).map(|o| base.generators_into(o).count() + base.generators_from(o).count()).collect();
        let remaining = pattern.total_size() - steps.len();
        for _ in 0..remaining {
            let mut best: Option<(u8, usize, usize, usize, Source)> = None;
            for o in 0..n_obj {
                for x in 0..pattern.size(o) {
                    if placed[o][x] {
                        continue;
                    }
                    // Forced: some placed element above has x as a face.
                    let forced = base.generators_from(o).find_map(|g| {
                        pattern_fibers[g][x].iter().find(|&&y| placed[base.generators()[g].dst][y]).map(|&y| (g, y))
                    });
                    let (rank, weight, source) = if let Some((g, y)) = forced {
                        (2, 0, Source::Forced { g, y })
                    } else {
                        let faces: Vec<usize> = base
                            .generators_into(o)
                            .filter(|&g| placed[base.generators()[g].src][pattern.act(g, x)])
                            .collect();
                        match faces.first() {
                            Some(&g) => (1, faces.len(), Source::Fiber { g, x: pattern.act(g, x) }),
                            None => (0, incidence[o], Source::Free),
                        }
                    };
                    let better = match &best {
                        None => true,
                        Some((r, w, _, _, _)) => (rank, weight) > (*r, *w),
                    };
                    if better {
                        best = Some((rank, weight, o, x, source));
                    }
                }
            }
            let (_, _, o, x, source) = best.expect("an unplaced element remains");
            placed[o][x] = true;
            steps.push(Step { obj: o, elem: x, source });
        }

        Matcher {
            pattern,
            target,
            mode,
            pattern_fibers,
            target_fibers,
            steps,
            image: (0..n_obj).map(|o| vec![UNSET; pattern.size(o)]).collect(),
            used: (0..n_obj).map(|o| vec![false; target.size(o)]).collect(),
        }
    }

    fn admissible(&self, o: usize, x: usize, y: usize) -> bool {
        if self.used[o][y] {
            return false;
        }
        let base = self.pattern.base();
        for g in base.generators_into(o) {
            let face = self.image[base.generators()[g].src][self.pattern.act(g, x)];
            if face != UNSET && face != self.target.act(g, y) {
                return false;
            }
        }
        for g in base.generators_from(o) {
            let above = &self.pattern_fibers[g][x];
            let room = self.target_fibers[g][y].len();
            let fits = match self.mode {
                Mode::Mono => above.len() <= room,
                Mode::Iso => above.len() == room,
            };
            if !fits {
                return false;
            }
            let dst = base.generators()[g].dst;
            for &z in above {
                let img = self.image[dst][z];
                if img != UNSET && self.target.act(g, img) != y {
                    return false;
                }
            }
        }
        true
    }

    fn search<F>(&mut self, depth: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Vec<usize>]) -> ControlFlow<()>,
    {
        if depth == self.steps.len() {
            return visit(&self.image);
        }
        let (o, x) = (self.steps[depth].obj, self.steps[depth].elem);
        let candidates: Vec<usize> = match self.steps[depth].source {
            Source::Seed(y) => vec![y],
            Source::Forced { g, y } => {
                let dst = self.pattern.base().generators()[g].dst;
                vec![self.target.act(g, self.image[dst][y])]
            }
            Source::Fiber { g, x: face } => {
                let src = self.pattern.base().generators()[g].src;
                self.target_fibers[g][self.image[src][face]].clone()
            }
            Source::Free => (0..self.target.size(o)).collect(),
        };
        for y in candidates {
            if !self.admissible(o, x, y) {
                continue;
            }
            self.image[o][x] = y;
            self.used[o][y] = true;
            let flow = self.search(depth + 1, visit);
            self.image[o][x] = UNSET;
            self.used[o][y] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn run<F>(pattern: &Presheaf, target: &Presheaf, mode: Mode, seeds: &[(usize, usize, usize)], mut visit: F)
where
    F: FnMut(&[Vec<usize>]) -> ControlFlow<()>,
{
    let n_obj = pattern.base().objects().len();
    let fits = (0..n_obj).all(|o| match mode {
        Mode::Mono => pattern.size(o) <= target.size(o),
        Mode::Iso => pattern.size(o) == target.size(o),
    });
    if !fits {
        return;
    }
    let mut m = Matcher::new(pattern, target, mode, seeds);
    let _ = m.search(0, &mut visit);
}

fn sorted(mut out: Vec<PresheafMorphism>) -> Vec<PresheafMorphism> {
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

/// Every monomorphism `pattern ↣ target`, duplicate free, in canonical order.
pub fn find_monos(pattern: &Arc<Presheaf>, target: &Arc<Presheaf>) -> Vec<PresheafMorphism> {
    let mut out = Vec::new();
    run(pattern, target, Mode::Mono, &[], |img| {
        out.push(PresheafMorphism::from_parts(pattern.clone(), target.clone(), img.to_vec()));
        ControlFlow::Continue(())
    });
    sorted(out)
}

fn seeds_for(e_l: &PresheafMorphism, f: &PresheafMorphism) -> Option<Vec<(usize, usize, usize)>> {
    let n_obj = e_l.source().base().objects().len();
    let mut fixed: Vec<Vec<usize>> = (0..n_obj).map(|o| vec![UNSET; e_l.target().size(o)]).collect();
    let mut seeds = Vec::new();
    for (o, slots) in fixed.iter_mut().enumerate() {
        for z in 0..e_l.source().size(o) {
            let x = e_l.apply(o, z);
            let y = f.apply(o, z);
            match slots[x] {
                UNSET => {
                    slots[x] = y;
                    seeds.push((o, x, y));
                }
                prev if prev != y => return None,
                _ => {}
            }
        }
    }
    Some(seeds)
}

/// All monos `f2: cod(e_l) ↣ cod(f)` with `compose(e_l, f2) = f`.
pub fn extend_mono(e_l: &PresheafMorphism, f: &PresheafMorphism) -> Vec<PresheafMorphism> {
    debug_assert!(e_l.source() == f.source());
    let Some(seeds) = seeds_for(e_l, f) else {
        return Vec::new();
    };
    let (pattern, target) = (e_l.target(), f.target());
    let mut out = Vec::new();
    run(pattern, target, Mode::Mono, &seeds, |img| {
        out.push(PresheafMorphism::from_parts(pattern.clone(), target.clone(), img.to_vec()));
        ControlFlow::Continue(())
    });
    sorted(out)
}

/// Whether `extend_mono(e_l, f)` is nonempty, stopping at the first witness.
pub fn has_extension(e_l: &PresheafMorphism, f: &PresheafMorphism) -> bool {
    let Some(seeds) = seeds_for(e_l, f) else {
        return false;
    };
    let mut found = false;
    run(e_l.target(), f.target(), Mode::Mono, &seeds, |_| {
        found = true;
        ControlFlow::Break(())
    });
    found
}

/// Some isomorphism `p -> q`, if one exists.
pub fn is_isomorphic(p: &Arc<Presheaf>, q: &Arc<Presheaf>) -> Option<PresheafMorphism> {
    if p == q {
        return Some(PresheafMorphism::identity(p.clone()));
    }
    let mut found = None;
    run(p, q, Mode::Iso, &[], |img| {
        found = Some(img.to_vec());
        ControlFlow::Break(())
    });
    found.map(|c| PresheafMorphism::from_parts(p.clone(), q.clone(), c))
}
