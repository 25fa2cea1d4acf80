//! Planar SVG figures: bodies, translated pieces, contact normals, witness points.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geom::{HalfSpace, Polytope, Vector};

const SIZE: f64 = 1000.0;
const PAD: f64 = 40.0;

const BODY: &str = "#1f4e79";
const PIECE: &str = "#c0504d";
const INNER: &str = "#4f9d4f";
const NORMAL: &str = "#7f3f98";
const WITNESS: &str = "#000000";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Body,
    Piece,
    Inner,
}

impl Role {
    fn colour(self) -> &'static str {
        match self {
            Role::Body => BODY,
            Role::Piece => PIECE,
            Role::Inner => INNER,
        }
    }
}

/// A 2D scene rendered into a fixed 1000x1000 view box.
///
/// The view is fitted to the bounded bodies, points and segments; unbounded
/// pieces such as planks are clipped to it.
#[derive(Clone, Debug, Default)]
pub struct Scene {
    polygons: Vec<(Role, Polytope)>,
    segments: Vec<(Vector, Vector)>,
    points: Vec<Vector>,
}

impl Scene {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn polytope(&mut self, role: Role, p: &Polytope) -> Result<&mut Self> {
        if p.dim() != 2 {
            return Err(Error::UnsupportedDimension(p.dim()));
        }
        self.polygons.push((role, p.clone()));
        Ok(self)
    }

    /// Arrow from `at` along `dir`.
    pub fn normal(&mut self, at: &Vector, dir: &Vector) -> Result<&mut Self> {
        check2(at)?;
        check2(dir)?;
        self.segments.push((at.clone(), at + dir));
        Ok(self)
    }

    pub fn point(&mut self, p: &Vector) -> Result<&mut Self> {
        check2(p)?;
        self.points.push(p.clone());
        Ok(self)
    }

    fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut grow = |p: &Vector| {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        };
        for (_, p) in &self.polygons {
            p.vertices().into_iter().flatten().for_each(&mut grow);
        }
        self.points.iter().for_each(&mut grow);
        for (a, b) in &self.segments {
            grow(a);
            grow(b);
        }
        if !lo[0].is_finite() {
            return ([-1.0, -1.0], [1.0, 1.0]);
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let margin = 0.1 * span;
        ([lo[0] - margin, lo[1] - margin], [hi[0] + margin, hi[1] + margin])
    }

    pub fn render(&self) -> String {
        let (lo, hi) = self.bounds();
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let k = (SIZE - 2.0 * PAD) / span;
        // y axis points up in the figure
        let map = |p: &Vector| (PAD + (p[0] - lo[0]) * k, SIZE - PAD - (p[1] - lo[1]) * k);

        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
        for (role, poly) in &self.polygons {
            let Some(vs) = clip(poly, lo, hi) else { continue };
            let pts: Vec<String> = vs.iter().map(|v| {
                let (x, y) = map(v);
                format!("{x:.2},{y:.2}")
            }).collect();
            let c = role.colour();
            let opacity = if *role == Role::Piece { 0.25 } else { 0.1 };
            let _ = writeln!(
                out,
                r#"<polygon points="{}" fill="{c}" fill-opacity="{opacity}" stroke="{c}" stroke-width="2"/>"#,
                pts.join(" ")
            );
        }
        for (a, b) in &self.segments {
            let (x1, y1) = map(a);
            let (x2, y2) = map(b);
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{NORMAL}" stroke-width="2"/>"#
            );
            let _ = writeln!(out, r#"<circle cx="{x1:.2}" cy="{y1:.2}" r="4" fill="{NORMAL}"/>"#);
        }
        for p in &self.points {
            let (x, y) = map(p);
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="7" fill="{WITNESS}"/>"#);
        }
        out.push_str("</svg>\n");
        out
    }
}

fn check2(v: &Vector) -> Result<()> {
    if v.dim() != 2 {
        return Err(Error::UnsupportedDimension(v.dim()));
    }
    Ok(())
}

/// Vertices of `poly` intersected with the box, or `None` if that is empty.
fn clip(poly: &Polytope, lo: [f64; 2], hi: [f64; 2]) -> Option<Vec<Vector>> {
    let mut hs = poly.halfspaces().to_vec();
    hs.push(HalfSpace::new(Vector::from([1.0, 0.0]), hi[0]).ok()?);
    hs.push(HalfSpace::new(Vector::from([-1.0, 0.0]), -lo[0]).ok()?);
    hs.push(HalfSpace::new(Vector::from([0.0, 1.0]), hi[1]).ok()?);
    hs.push(HalfSpace::new(Vector::from([0.0, -1.0]), -lo[1]).ok()?);
    Polytope::new(2, hs, None).ok()?.vertices().map(<[Vector]>::to_vec).filter(|v| v.len() >= 3)
}
