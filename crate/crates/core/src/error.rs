use thiserror::Error;

/// Failures raised by the geometry engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("conic is not a real, nondegenerate ellipse")]
    NotAnEllipse,
    #[error("conic has no quadratic part")]
    NotAConic,
    #[error("line has (l, m) = (0, 0)")]
    DegenerateLine,
    #[error("point is inside or on the conic; no two real tangents exist")]
    PointInsideConic,
    #[error("affine map is singular (det = {det:e})")]
    SingularMap { det: f64 },
    #[error("affine map has a nonzero translation; concentric pairs require a central map")]
    NonCentralMap,
    #[error("triangle is degenerate (area {area:e} for longest side {longest:e})")]
    DegenerateTriangle { area: f64, longest: f64 },
    #[error("trilinear point lies on the line at infinity")]
    PointAtInfinity,
    #[error("trilinear coordinates must be strictly interior (all positive), got [{u}:{v}:{w}]")]
    NotInterior { u: f64, v: f64, w: f64 },
    #[error("exradius {index} overflowed (s - s_i = {gap:e})")]
    ExradiusOverflow { index: usize, gap: f64 },
    #[error("invalid axes: {0}")]
    InvalidAxes(String),
    #[error("no real confocal caustic closes a 3-periodic for a = {a}, b = {b}")]
    NoRealCaustic { a: f64, b: f64 },
    #[error("3-periodic fails to close at t = {t}: residual {residual:e}")]
    ClosureFailure { t: f64, residual: f64 },
    #[error("vertex ({x}, {y}) is not strictly outside the caustic")]
    TangentFailure { x: f64, y: f64 },
    #[error("circumconic constraint system has nullity != 1 (singular-value gap {gap:e})")]
    RankDeficient { gap: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
