//! Depth-first orbit expansion of the limit set, rasterization and image writers.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::farey::Letter;
use crate::groups::{FNCoords, GroupData};
use crate::moebius::{ExtComplex, MoebiusMap};
use crate::{Error, Result, C64};

/// Rectangle `[xmin, xmax] × [ymin, ymax]` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Viewport> {
        let v = Viewport {
            xmin,
            xmax,
            ymin,
            ymax,
        };
        v.validate()?;
        Ok(v)
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.xmin, self.xmax, self.ymin, self.ymax]
            .iter()
            .all(|x| x.is_finite());
        if finite && self.xmin < self.xmax && self.ymin < self.ymax {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "empty or non-finite viewport {self:?}"
            )))
        }
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn center(&self) -> C64 {
        C64::new((self.xmin + self.xmax) / 2.0, (self.ymin + self.ymax) / 2.0)
    }

    pub fn contains(&self, z: C64) -> bool {
        z.re >= self.xmin && z.re <= self.xmax && z.im >= self.ymin && z.im <= self.ymax
    }

    /// Shrinks every side by `margin`.
    pub fn inset(&self, margin: f64) -> Viewport {
        Viewport {
            xmin: self.xmin + margin,
            xmax: self.xmax - margin,
            ymin: self.ymin + margin,
            ymax: self.ymax - margin,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderConfig {
    pub max_word_length: usize,
    /// Subtrees whose reference-point images have diameter below this are not expanded.
    pub contraction_eps: f64,
    pub viewport: Viewport,
    pub width: u32,
    pub height: u32,
    /// Keep the generating word of each emitted point.
    pub record_words: bool,
}

impl RenderConfig {
    pub fn new(
        max_word_length: usize,
        contraction_eps: f64,
        viewport: Viewport,
        width: u32,
        height: u32,
    ) -> Result<RenderConfig> {
        let cfg = RenderConfig {
            max_word_length,
            contraction_eps,
            viewport,
            width,
            height,
            record_words: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_word_length < 1 {
            return Err(Error::Domain("max_word_length must be at least 1".into()));
        }
        if self.contraction_eps.is_nan() || self.contraction_eps <= 0.0 {
            return Err(Error::Domain("contraction_eps must be positive".into()));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::Domain("pixel dimensions must be positive".into()));
        }
        self.viewport.validate()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<C64>,
    /// Parallel to `points` when words were recorded.
    pub words: Option<Vec<String>>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

const LETTERS: [Letter; 4] = [Letter::S, Letter::SInv, Letter::T, Letter::TInv];

struct Expander<'a> {
    gens: [MoebiusMap; 4],
    seed: C64,
    refs: [C64; 3],
    cfg: &'a RenderConfig,
}

#[derive(Default)]
struct Sink {
    points: Vec<C64>,
    words: Vec<String>,
}

impl Expander<'_> {
    fn contracted(&self, m: &MoebiusMap) -> bool {
        let imgs: Vec<Option<C64>> = self.refs.iter().map(|&z| m.apply_finite(z)).collect();
        let mut diam: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                match (imgs[i], imgs[j]) {
                    (Some(a), Some(b)) => diam = diam.max((a - b).norm()),
                    _ => return false,
                }
            }
        }
        diam < self.cfg.contraction_eps
    }

    fn visit(&self, m: &MoebiusMap, word: &mut Vec<Letter>, sink: &mut Sink) {
        if let Some(p) = m.apply_finite(self.seed) {
            if p.is_finite() && self.cfg.viewport.contains(p) {
                sink.points.push(p);
                if self.cfg.record_words {
                    sink.words.push(word.iter().map(|l| l.as_char()).collect());
                }
            }
        }
        if word.len() >= self.cfg.max_word_length || self.contracted(m) {
            return;
        }
        let last = *word.last().expect("visit is called below the root");
        for (k, &l) in LETTERS.iter().enumerate() {
            if l == last.inverse() {
                continue;
            }
            word.push(l);
            self.visit(&m.compose(&self.gens[k]), word, sink);
            word.pop();
        }
    }
}

/// Images of the parabolic fixed point `−1` of the commutator under all
/// reduced words, in lexicographic order with `S < s < T < t`.
///
/// Each node of the word tree emits its point; a branch stops at
/// `max_word_length` or once it maps three reference points spanning the
/// viewport to a set of diameter below `contraction_eps`.
pub fn limit_points(g: &GroupData, cfg: &RenderConfig) -> Result<PointSet> {
    cfg.validate()?;
    let c = cfg.viewport.center();
    let half = cfg.viewport.width().max(cfg.viewport.height()) / 2.0;
    let ex = Expander {
        gens: [g.s, g.s.inverse(), g.t, g.t.inverse()],
        seed: C64::new(-1.0, 0.0),
        refs: [c - half, c, c + half],
        cfg,
    };
    let sinks: Vec<Sink> = (0..4)
        .into_par_iter()
        .map(|k| {
            let mut sink = Sink::default();
            ex.visit(&ex.gens[k], &mut vec![LETTERS[k]], &mut sink);
            sink
        })
        .collect();
    let mut out = PointSet {
        points: Vec::new(),
        words: cfg.record_words.then(Vec::new),
    };
    for sink in sinks {
        out.points.extend(sink.points);
        if let Some(w) = out.words.as_mut() {
            w.extend(sink.words);
        }
    }
    Ok(out)
}

/// Grayscale image, row-major from the top; 255 background, 0 marked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn blank(width: u32, height: u32) -> Raster {
        Raster {
            width,
            height,
            pixels: vec![255; width as usize * height as usize],
        }
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[(y * self.width + x) as usize]
    }

    pub fn marked(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.pixels
            .iter()
            .enumerate()
            .filter(|(_, &v)| v == 0)
            .map(move |(i, _)| {
                let i = i as u32;
                (i % self.width, i / self.width)
            })
    }

    pub fn write_ppm<W: Write>(&self, out: &mut W) -> io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        let rgb: Vec<u8> = self.pixels.iter().flat_map(|&v| [v, v, v]).collect();
        out.write_all(&rgb)
    }

    /// Marked pixels as radius-0.5 circles at pixel centers.
    pub fn write_svg<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = self.width,
            h = self.height
        )?;
        writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
        for (x, y) in self.marked() {
            writeln!(
                out,
                r#"<circle cx="{}.5" cy="{}.5" r="0.5" fill="black"/>"#,
                x, y
            )?;
        }
        writeln!(out, "</svg>")
    }
}

/// Pixel containing `z`, or `None` outside the viewport.
pub fn pixel_of(z: C64, cfg: &RenderConfig) -> Option<(u32, u32)> {
    let v = &cfg.viewport;
    if !v.contains(z) {
        return None;
    }
    let fx = ((z.re - v.xmin) / v.width() * cfg.width as f64).floor() as i64;
    let fy = ((v.ymax - z.im) / v.height() * cfg.height as f64).floor() as i64;
    Some((
        fx.clamp(0, cfg.width as i64 - 1) as u32,
        fy.clamp(0, cfg.height as i64 - 1) as u32,
    ))
}

pub fn rasterize(ps: &PointSet, cfg: &RenderConfig) -> Raster {
    let mut r = Raster::blank(cfg.width, cfg.height);
    for &z in &ps.points {
        if let Some((x, y)) = pixel_of(z, cfg) {
            r.pixels[(y * cfg.width + x) as usize] = 0;
        }
    }
    r
}

/// `limset_<lambda>_<retau>_<imtau>.<ext>` with six decimals per field.
pub fn image_file_name(coords: &FNCoords, ext: &str) -> String {
    format!(
        "limset_{:.6}_{:.6}_{:.6}.{}",
        coords.lambda.re, coords.tau.re, coords.tau.im, ext
    )
}

/// Seed image check used by tests and callers: the commutator fixes `−1`.
pub fn seed_is_fixed(g: &GroupData, tol: f64) -> bool {
    match g.k.apply(ExtComplex::Finite(C64::new(-1.0, 0.0))) {
        ExtComplex::Finite(z) => (z + 1.0).norm() < tol,
        ExtComplex::Infinity => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn group(l: f64, tau: C64) -> GroupData {
        build_group(&FNCoords::new(c(l, 0.0), tau).unwrap()).unwrap()
    }

    fn cfg(len: usize, eps: f64, view: f64, px: u32) -> RenderConfig {
        RenderConfig::new(
            len,
            eps,
            Viewport::new(-view, view, -view, view).unwrap(),
            px,
            px,
        )
        .unwrap()
    }

    #[test]
    fn config_validation() {
        let v = Viewport::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert!(RenderConfig::new(0, 0.1, v, 10, 10).is_err());
        assert!(RenderConfig::new(1, 0.0, v, 10, 10).is_err());
        assert!(RenderConfig::new(1, 0.1, v, 0, 10).is_err());
        assert!(Viewport::new(1.0, -1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn seed_is_commutator_fixed_point() {
        assert!(seed_is_fixed(&group(0.7, c(0.3, 0.4)), 1e-12));
    }

    #[test]
    fn length_one_emits_generator_images() {
        let g = group(2f64.ln(), c(0.0, 0.5));
        let mut cf = cfg(1, 1e-6, 100.0, 10);
        cf.record_words = true;
        let ps = limit_points(&g, &cf).unwrap();
        let gens = [g.s, g.s.inverse(), g.t, g.t.inverse()];
        let expected: Vec<C64> = gens
            .iter()
            .map(|m| m.apply_finite(c(-1.0, 0.0)).unwrap())
            .collect();
        assert_eq!(ps.points, expected);
        assert_eq!(ps.words.unwrap(), ["S", "s", "T", "t"]);
    }

    #[test]
    fn words_are_lexicographic_and_reduced() {
        let g = group(1.0, c(0.2, 0.3));
        let mut cf = cfg(3, 1e-9, 1e6, 10);
        cf.record_words = true;
        let words = limit_points(&g, &cf).unwrap().words.unwrap();
        assert_eq!(words.len(), 4 + 12 + 36);
        assert_eq!(&words[..4], ["S", "SS", "SSS", "SST"]);
        let rank = |w: &str| {
            w.chars()
                .map(|ch| "SsTt".find(ch).unwrap())
                .collect::<Vec<_>>()
        };
        assert!(words.windows(2).all(|p| rank(&p[0]) < rank(&p[1])));
        assert!(words.iter().all(|w| !w.contains("Ss")
            && !w.contains("sS")
            && !w.contains("Tt")
            && !w.contains("tT")));
    }

    #[test]
    fn fuchsian_points_are_real() {
        let g = group(0.9, c(0.4, 0.0));
        let cf = cfg(10, 1e-3, 10.0, 200);
        let ps = limit_points(&g, &cf).unwrap();
        assert!(!ps.is_empty());
        assert!(ps.points.iter().all(|z| z.im.abs() < 1e-9));
        let r = rasterize(&ps, &cf);
        let axis_row = pixel_of(c(0.0, 0.0), &cf).unwrap().1 as i64;
        assert!(r.marked().all(|(_, y)| (y as i64 - axis_row).abs() <= 1));
    }

    #[test]
    fn deeper_expansion_adds_points() {
        let g = group(2f64.ln(), c(0.0, 0.5));
        let a = limit_points(&g, &cfg(5, 1e-3, 5.0, 10)).unwrap();
        let b = limit_points(&g, &cfg(7, 1e-3, 5.0, 10)).unwrap();
        assert!(b.len() > a.len());
        let key = |z: &C64| (z.re.to_bits(), z.im.to_bits());
        let set: std::collections::HashSet<_> = b.points.iter().map(key).collect();
        assert!(a.points.iter().all(|z| set.contains(&key(z))));
    }

    #[test]
    fn output_is_deterministic() {
        let g = group(2f64.ln(), c(0.0, 0.5));
        let cf = cfg(9, 1e-3, 5.0, 64);
        let a = rasterize(&limit_points(&g, &cf).unwrap(), &cf);
        let b = rasterize(&limit_points(&g, &cf).unwrap(), &cf);
        assert_eq!(a, b);
        let (mut pa, mut pb) = (Vec::new(), Vec::new());
        a.write_ppm(&mut pa).unwrap();
        b.write_ppm(&mut pb).unwrap();
        assert_eq!(pa, pb);
    }

    #[test]
    fn approximately_invariant() {
        let g = group(2f64.ln(), c(0.0, 0.5));
        let eps = 0.02;
        let cf = cfg(40, eps, 3.0, 10);
        let ps = limit_points(&g, &cf).unwrap();
        // bucket the points for nearest-neighbour queries
        let cell = eps;
        let mut grid: std::collections::HashMap<(i64, i64), Vec<C64>> = Default::default();
        let key = |z: C64| ((z.re / cell).floor() as i64, (z.im / cell).floor() as i64);
        for &z in &ps.points {
            grid.entry(key(z)).or_default().push(z);
        }
        let near = |z: C64| {
            let (kx, ky) = key(z);
            (-5..=5).any(|dx| {
                (-5..=5).any(|dy| {
                    grid.get(&(kx + dx, ky + dy))
                        .is_some_and(|v| v.iter().any(|w| (w - z).norm() < 5.0 * eps))
                })
            })
        };
        let inner = cf.viewport.inset(2.0 * eps);
        for m in [g.s, g.s.inverse(), g.t, g.t.inverse()] {
            for &z in ps.points.iter().filter(|z| inner.contains(**z)) {
                let w = m.apply_finite(z).unwrap();
                if inner.contains(w) {
                    assert!(near(w), "{w} has no neighbour");
                }
            }
        }
    }

    #[test]
    fn tame_limit_set_closes_up() {
        // The limit set passes through ∞, so look at it through the Cayley map
        // z ↦ (z − i)/(z + i), which sends the Fuchsian circle to the unit circle.
        let g = group(2f64.ln(), c(0.0, 0.5));
        let ps = limit_points(&g, &cfg(14, 1e-3, 200.0, 10)).unwrap();
        let w: Vec<C64> = ps
            .points
            .iter()
            .map(|z| (z - C64::i()) / (z + C64::i()))
            .collect();
        let centroid = w.iter().sum::<C64>() / w.len() as f64;
        let mut args: Vec<f64> = w.iter().map(|z| (z - centroid).arg()).collect();
        args.sort_by(f64::total_cmp);
        let wrap = args[0] + 2.0 * std::f64::consts::PI - args[args.len() - 1];
        let max_gap = args.windows(2).map(|p| p[1] - p[0]).fold(wrap, f64::max);
        assert!(max_gap < 0.1, "largest angular gap {max_gap}");
    }

    #[test]
    fn raster_examples() {
        let cf = cfg(1, 0.1, 1.0, 11);
        let blank = rasterize(&PointSet::default(), &cf);
        assert!(blank.pixels.iter().all(|&v| v == 255));
        let one = rasterize(
            &PointSet {
                points: vec![c(0.0, 0.0)],
                words: None,
            },
            &cf,
        );
        assert_eq!(one.marked().collect::<Vec<_>>(), [(5, 5)]);
        let mut svg = Vec::new();
        one.write_svg(&mut svg).unwrap();
        let svg = String::from_utf8(svg).unwrap();
        assert!(svg.contains(r#"<circle cx="5.5" cy="5.5" r="0.5""#));
        let mut ppm = Vec::new();
        one.write_ppm(&mut ppm).unwrap();
        assert!(ppm.starts_with(b"P6\n11 11\n255\n"));
        assert_eq!(ppm.len(), 13 + 11 * 11 * 3);
    }

    #[test]
    fn file_names() {
        let coords = FNCoords::new(c(2f64.ln(), 0.0), c(0.0, 0.5)).unwrap();
        assert_eq!(
            image_file_name(&coords, "ppm"),
            "limset_0.693147_0.000000_0.500000.ppm"
        );
    }
}
