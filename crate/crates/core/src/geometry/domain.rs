use serde::{Deserialize, Serialize};

use crate::geometry::geodesic::{flow, BOUNDARY_TOL};
use crate::geometry::MetricField;
use crate::{Error, Result, Vec2};

/// One monomial `c · x^i · y^j` of an implicit boundary polynomial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolyTerm {
    pub i: u32,
    pub j: u32,
    pub c: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    Disk {
        radius: f64,
    },
    Ellipse {
        a: f64,
        b: f64,
    },
    /// `b(x, y) = Σ c x^i y^j`; the origin must be interior.
    ImplicitPoly {
        terms: Vec<PolyTerm>,
    },
}

/// Convex chart region `{b < 0}` containing the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    kind: DomainKind,
    max_radius: f64,
}

impl Domain {
    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("disk radius must be positive"));
        }
        Ok(Domain {
            kind: DomainKind::Disk { radius },
            max_radius: radius,
        })
    }

    pub fn unit_disk() -> Self {
        Domain::disk(1.0).unwrap()
    }

    pub fn ellipse(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
            return Err(Error::invalid("ellipse semi-axes must be positive"));
        }
        Ok(Domain {
            kind: DomainKind::Ellipse { a, b },
            max_radius: a.max(b),
        })
    }

    pub fn implicit_poly(terms: Vec<PolyTerm>) -> Result<Self> {
        let mut d = Domain {
            kind: DomainKind::ImplicitPoly { terms },
            max_radius: 0.0,
        };
        if !(d.b(&Vec2::zeros()) < 0.0) {
            return Err(Error::invalid("implicit domain must contain the origin"));
        }
        // grow a bracket until every direction has left the domain
        let mut r = 1.0;
        'grow: for _ in 0..60 {
            for k in 0..256 {
                let psi = std::f64::consts::TAU * k as f64 / 256.0;
                if d.b(&(Vec2::new(psi.cos(), psi.sin()) * r)) <= 0.0 {
                    r *= 2.0;
                    continue 'grow;
                }
            }
            d.max_radius = r;
            break;
        }
        if d.max_radius == 0.0 {
            return Err(Error::invalid("implicit domain is unbounded"));
        }
        let rmax = (0..1024)
            .map(|k| {
                let psi = std::f64::consts::TAU * k as f64 / 1024.0;
                d.boundary_point_at_angle(psi).norm()
            })
            .fold(0.0, f64::max);
        d.max_radius = rmax * 1.01;
        Ok(d)
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    /// Boundary function: negative inside, zero on `∂M`, positive outside.
    pub fn b(&self, x: &Vec2) -> f64 {
        match &self.kind {
            DomainKind::Disk { radius } => x.norm_squared() - radius * radius,
            DomainKind::Ellipse { a, b } => (x[0] / a).powi(2) + (x[1] / b).powi(2) - 1.0,
            DomainKind::ImplicitPoly { terms } => terms
                .iter()
                .map(|t| t.c * x[0].powi(t.i as i32) * x[1].powi(t.j as i32))
                .sum(),
        }
    }

    pub fn gradient(&self, x: &Vec2) -> Vec2 {
        match &self.kind {
            DomainKind::Disk { .. } => x * 2.0,
            DomainKind::Ellipse { a, b } => Vec2::new(2.0 * x[0] / (a * a), 2.0 * x[1] / (b * b)),
            DomainKind::ImplicitPoly { terms } => {
                let mut g = Vec2::zeros();
                for t in terms {
                    if t.i > 0 {
                        g[0] +=
                            t.c * t.i as f64 * x[0].powi(t.i as i32 - 1) * x[1].powi(t.j as i32);
                    }
                    if t.j > 0 {
                        g[1] +=
                            t.c * t.j as f64 * x[0].powi(t.i as i32) * x[1].powi(t.j as i32 - 1);
                    }
                }
                g
            }
        }
    }

    pub fn contains(&self, x: &Vec2, tol: f64) -> bool {
        self.b(x) <= tol
    }

    pub fn on_boundary(&self, x: &Vec2) -> bool {
        self.b(x).abs() <= BOUNDARY_TOL
    }

    /// Upper bound on `|x|` over the domain.
    pub fn max_radius(&self) -> f64 {
        self.max_radius
    }

    /// Chart diameter (an upper bound for implicit domains).
    pub fn diameter(&self) -> f64 {
        2.0 * self.max_radius
    }

    /// Approximate signed chart distance to `∂M`, positive inside.
    pub fn inside_distance(&self, x: &Vec2) -> f64 {
        let g = self.gradient(x).norm();
        -self.b(x) / g.max(1e-300)
    }

    /// Boundary point hit by the ray from the origin at polar angle `psi`.
    pub fn boundary_point_at_angle(&self, psi: f64) -> Vec2 {
        let u = Vec2::new(psi.cos(), psi.sin());
        match &self.kind {
            DomainKind::Disk { radius } => u * *radius,
            DomainKind::Ellipse { a, b } => u / ((u[0] / a).powi(2) + (u[1] / b).powi(2)).sqrt(),
            DomainKind::ImplicitPoly { .. } => self.ray_to_boundary(&Vec2::zeros(), &u),
        }
    }

    /// First boundary crossing of the ray `from + t·dir`, `t > 0`, with `from` inside.
    pub fn ray_to_boundary(&self, from: &Vec2, dir: &Vec2) -> Vec2 {
        let d = dir.normalize();
        let mut hi = self.diameter().max(1e-3);
        while self.b(&(from + d * hi)) <= 0.0 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.b(&(from + d * mid)) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-16 * hi.max(1.0) {
                break;
            }
        }
        let plo = from + d * lo;
        let phi = from + d * hi;
        if self.b(&plo).abs() <= self.b(&phi).abs() {
            plo
        } else {
            phi
        }
    }

    /// Unit chart tangent at a boundary point, counterclockwise.
    pub fn boundary_tangent(&self, x: &Vec2) -> Vec2 {
        let g = self.gradient(x);
        Vec2::new(-g[1], g[0]).normalize()
    }

    /// Unit chart inward normal at a boundary point.
    pub fn inward_normal(&self, x: &Vec2) -> Vec2 {
        -self.gradient(x).normalize()
    }
}

/// Inward unit normal in the Riemannian metric, `-∇b / (e^λ |∇b|)`.
pub fn boundary_normal(domain: &Domain, metric: &MetricField, x: &Vec2) -> Result<Vec2> {
    let bx = domain.b(x);
    if bx.abs() > BOUNDARY_TOL {
        return Err(Error::NotOnBoundary(bx));
    }
    Ok(domain.inward_normal(x) / metric.scale(x))
}

/// Geodesic curvature of `∂M` at `x` with respect to the inward normal.
///
/// Follows the boundary-tangent geodesic for `±δ` and reads off the second
/// derivative of `b` along it, divided by the Riemannian norm of `db`.
pub fn second_fundamental_form(domain: &Domain, metric: &MetricField, x: &Vec2) -> Result<f64> {
    let bx = domain.b(x);
    if bx.abs() > BOUNDARY_TOL {
        return Err(Error::NotOnBoundary(bx));
    }
    let delta = 1e-2 * domain.diameter().min(1.0);
    let t = metric.normalize(x, &domain.boundary_tangent(x));
    let step = delta / 16.0;
    let (xp, _, _) = flow(metric, *x, t, None, delta, step);
    let (xm, _, _) = flow(metric, *x, t, None, -delta, step);
    let b2 = (domain.b(&xp) + domain.b(&xm) - 2.0 * bx) / (delta * delta);
    let db_norm = domain.gradient(x).norm() / metric.scale(x);
    Ok(b2 / db_norm)
}

/// Serialized form `{kind, params}`; implicit polynomials use flat `[i, j, c]` triples.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DomainSpec {
    pub kind: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

impl TryFrom<&DomainSpec> for Domain {
    type Error = Error;

    fn try_from(spec: &DomainSpec) -> Result<Self> {
        match (spec.kind.as_str(), spec.params.as_slice()) {
            ("disk", [r]) => Domain::disk(*r),
            ("ellipse", [a, b]) => Domain::ellipse(*a, *b),
            ("implicit-poly", p) if !p.is_empty() && p.len() % 3 == 0 => {
                let terms = p
                    .chunks(3)
                    .map(|c| {
                        if c[0] < 0.0 || c[1] < 0.0 || c[0].fract() != 0.0 || c[1].fract() != 0.0 {
                            Err(Error::invalid(
                                "polynomial exponents must be nonnegative integers",
                            ))
                        } else {
                            Ok(PolyTerm {
                                i: c[0] as u32,
                                j: c[1] as u32,
                                c: c[2],
                            })
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Domain::implicit_poly(terms)
            }
            (kind, _) => Err(Error::invalid(format!(
                "bad domain spec '{kind}' with {} params",
                spec.params.len()
            ))),
        }
    }
}

impl From<&Domain> for DomainSpec {
    fn from(d: &Domain) -> Self {
        match &d.kind {
            DomainKind::Disk { radius } => DomainSpec {
                kind: "disk".into(),
                params: vec![*radius],
            },
            DomainKind::Ellipse { a, b } => DomainSpec {
                kind: "ellipse".into(),
                params: vec![*a, *b],
            },
            DomainKind::ImplicitPoly { terms } => DomainSpec {
                kind: "implicit-poly".into(),
                params: terms
                    .iter()
                    .flat_map(|t| [t.i as f64, t.j as f64, t.c])
                    .collect(),
            },
        }
    }
}
