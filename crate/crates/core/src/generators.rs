//! Seeded random terrains.
//!
//! All classes start from a random walk with x = 0, 1, …, n−1 and exact
//! rational heights. Smooth components are rounded to multiples of 2^-20
//! before they are added, so every coordinate stays exact.

use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GeneratorError;
use crate::geometry::Point;
use crate::scalar::{Rational, Scalar};
use crate::terrain::Terrain;

/// Walk offsets are `step_bound * k / STEP_DENOMINATOR` with integer `k`.
pub const STEP_DENOMINATOR: i64 = 1024;
/// Smooth components are rounded to multiples of `1 / SMOOTH_DENOMINATOR`.
pub const SMOOTH_DENOMINATOR: i64 = 1 << 20;
/// Number of vertices a valley adds to the walk edge it replaces.
pub const VALLEY_VERTICES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum TerrainClass {
    Walk,
    SineWalk,
    ParabolaWalk,
    ConcaveValleys,
}

impl TerrainClass {
    pub const ALL: [TerrainClass; 4] = [
        TerrainClass::Walk,
        TerrainClass::SineWalk,
        TerrainClass::ParabolaWalk,
        TerrainClass::ConcaveValleys,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TerrainClass::Walk => "walk",
            TerrainClass::SineWalk => "sinewalk",
            TerrainClass::ParabolaWalk => "parabolawalk",
            TerrainClass::ConcaveValleys => "concavevalleys",
        }
    }
}

impl fmt::Display for TerrainClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TerrainClass {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        TerrainClass::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| GeneratorError::UnknownClass(s.to_string()))
    }
}

/// Class parameters. `None` picks a default that depends on `n`, see
/// [`ClassParams::resolve`].
#[derive(Clone, Debug)]
pub struct ClassParams {
    pub step_bound: Rational,
    pub amplitude: Option<f64>,
    pub periods: f64,
    pub scale: Option<f64>,
    pub valleys: Option<usize>,
    pub slack: Rational,
}

impl Default for ClassParams {
    fn default() -> Self {
        ClassParams {
            step_bound: Rational::from_i64(1),
            amplitude: None,
            periods: 2.0,
            scale: None,
            valleys: None,
            slack: Rational::from_ratio(1, 4),
        }
    }
}

/// Parameters with all defaults filled in, as reported in statistics.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ResolvedParams {
    pub class: TerrainClass,
    pub n: usize,
    pub seed: u64,
    pub step_bound: String,
    pub amplitude: f64,
    pub periods: f64,
    pub scale: f64,
    pub valleys: usize,
    pub slack: String,
}

impl ClassParams {
    /// Defaults: sine amplitude `n/8` and parabola scale `n/4`, both in units
    /// of `step_bound`; one valley per 20 vertices, at least one, at most as
    /// many as fit.
    pub fn resolve(&self, class: TerrainClass, n: usize, seed: u64) -> ResolvedParams {
        let step = self.step_bound.to_f64();
        let max_valleys = n.saturating_sub(1) / (VALLEY_VERTICES + 1);
        ResolvedParams {
            class,
            n,
            seed,
            step_bound: self.step_bound.to_string(),
            amplitude: self.amplitude.unwrap_or(step * n as f64 / 8.0),
            periods: self.periods,
            scale: self.scale.unwrap_or(step * n as f64 / 4.0),
            valleys: self
                .valleys
                .unwrap_or((n / 20).clamp(1, max_valleys.max(1))),
            slack: self.slack.to_string(),
        }
    }
}

pub fn generate(
    class: TerrainClass,
    n: usize,
    seed: u64,
    params: &ClassParams,
) -> Result<Terrain<Rational>, GeneratorError> {
    let r = params.resolve(class, n, seed);
    match class {
        TerrainClass::Walk => gen_walk(n, seed, &params.step_bound),
        TerrainClass::SineWalk => gen_sinewalk(n, seed, &params.step_bound, r.amplitude, r.periods),
        TerrainClass::ParabolaWalk => gen_parabolawalk(n, seed, &params.step_bound, r.scale),
        TerrainClass::ConcaveValleys => {
            gen_concavevalleys(n, seed, &params.step_bound, r.valleys, &params.slack)
        }
    }
}

fn walk_heights(n: usize, rng: &mut ChaCha8Rng, step_bound: &Rational) -> Vec<Rational> {
    let unit = step_bound.clone() / Rational::from_i64(STEP_DENOMINATOR);
    let mut y = Rational::from_i64(0);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            let k: i64 = rng.gen_range(-STEP_DENOMINATOR..=STEP_DENOMINATOR);
            y = y + unit.clone() * Rational::from_i64(k);
        }
        out.push(y.clone());
    }
    out
}

fn terrain_from_heights(heights: Vec<Rational>) -> Terrain<Rational> {
    Terrain::from_coords(
        heights
            .into_iter()
            .enumerate()
            .map(|(i, y)| (Rational::from_i64(i as i64), y)),
    )
    .expect("integer x-coordinates are increasing")
}

fn rounded(v: f64) -> Rational {
    Rational::from_ratio(
        (v * SMOOTH_DENOMINATOR as f64).round() as i64,
        SMOOTH_DENOMINATOR,
    )
}

/// Random walk: `y[i+1] = y[i] + step_bound * k / 1024`, `k` uniform in
/// `[-1024, 1024]`.
pub fn gen_walk(
    n: usize,
    seed: u64,
    step_bound: &Rational,
) -> Result<Terrain<Rational>, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(terrain_from_heights(walk_heights(n, &mut rng, step_bound)))
}

/// Walk plus `amplitude * sin(2π periods i / n)`.
pub fn gen_sinewalk(
    n: usize,
    seed: u64,
    step_bound: &Rational,
    amplitude: f64,
    periods: f64,
) -> Result<Terrain<Rational>, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heights = walk_heights(n, &mut rng, step_bound)
        .into_iter()
        .enumerate()
        .map(|(i, y)| {
            let phase = 2.0 * std::f64::consts::PI * periods * i as f64 / n as f64;
            y + rounded(amplitude * phase.sin())
        })
        .collect();
    Ok(terrain_from_heights(heights))
}

/// Walk plus `scale * (i - n/2)² * 4 / n²`, a parabola rising to `scale` at
/// both ends.
pub fn gen_parabolawalk(
    n: usize,
    seed: u64,
    step_bound: &Rational,
    scale: f64,
) -> Result<Terrain<Rational>, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = n as f64 / 2.0;
    let heights = walk_heights(n, &mut rng, step_bound)
        .into_iter()
        .enumerate()
        .map(|(i, y)| {
            let d = i as f64 - half;
            y + rounded(scale * d * d * 4.0 / (n as f64 * n as f64))
        })
        .collect();
    Ok(terrain_from_heights(heights))
}

/// The six inner vertices of a valley in local coordinates, between the rims
/// (-4, 6) and (4, 6).
///
/// Each slope bends away from the valley so that no vertex sees the whole
/// slope it sits on, while the midpoint of the bottom edge sees both slopes
/// entirely.
pub fn valley_gadget(slack: &Rational) -> Result<Vec<(Rational, Rational)>, GeneratorError> {
    let zero = Rational::from_i64(0);
    let half = Rational::from_ratio(1, 2);
    if slack <= &zero || slack >= &half {
        return Err(GeneratorError::BadSlack);
    }
    let q = Rational::from_i64;
    let t = Rational::from_ratio(3, 2) + slack.clone();
    let y2 = q(6) - t.clone();
    // strictly between the heights where v_bottom would see L2 and where L1
    // would see the rim
    let lo = y2.clone() / q(2);
    let hi = q(6) - q(2) * t;
    let y1 = (lo + hi) / q(2);
    Ok(vec![
        (q(-3), y2.clone()),
        (q(-2), y1.clone()),
        (q(-1), zero.clone()),
        (q(1), zero),
        (q(2), y1),
        (q(3), y2),
    ])
}

/// Walk whose edges at `valleys` random positions are replaced by valleys
/// with bulging slopes. The walk has `n - 6 * valleys` vertices so that the
/// result has exactly `n`.
pub fn gen_concavevalleys(
    n: usize,
    seed: u64,
    step_bound: &Rational,
    valleys: usize,
    slack: &Rational,
) -> Result<Terrain<Rational>, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::TooSmall(n));
    }
    let gadget = valley_gadget(slack)?;
    let walk_n = n
        .checked_sub(VALLEY_VERTICES * valleys)
        .filter(|&w| w >= 2 && w > valleys);
    let Some(walk_n) = walk_n else {
        return Err(GeneratorError::TooManyValleys { valleys, n });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heights = walk_heights(walk_n, &mut rng, step_bound);
    let mut chosen = vec![false; walk_n - 1];
    for e in sample(&mut rng, walk_n - 1, valleys) {
        chosen[e] = true;
    }

    let q = Rational::from_i64;
    let eighth = Rational::from_ratio(1, 8);
    let depth_unit = step_bound.clone();
    let mut pts = Vec::with_capacity(n);
    for i in 0..walk_n {
        let (xi, yi) = (q(i as i64), heights[i].clone());
        pts.push(Point::new(xi.clone(), yi.clone()));
        if i + 1 < walk_n && chosen[i] {
            let rise = heights[i + 1].clone() - yi.clone();
            for (gx, gy) in &gadget {
                // affine: x into [i, i+1], rims onto the walk vertices
                let s = (gx.clone() + q(4)) * eighth.clone();
                let x = xi.clone() + s.clone();
                let y = yi.clone() + depth_unit.clone() * (gy.clone() - q(6)) + rise.clone() * s;
                pts.push(Point::new(x, y));
            }
        }
    }
    Ok(Terrain::new(pts).expect("valleys keep x increasing"))
}
