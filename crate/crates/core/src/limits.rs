/// Environment variable that overrides the ball vertex cap.
pub const MAX_VERTICES_ENV: &str = "ORBITAL_FORGE_MAX_VERTICES";

pub const DEFAULT_MAX_VERTICES: usize = 1_000_000;

/// Groups larger than this refuse element filtering.
pub const DEFAULT_MAX_ELEMENTS: usize = 1_000_000;

/// Factor groups of an amalgam get dense multiplication tables, so they are kept small.
pub const MAX_FACTOR_ORDER: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_vertices: usize,
    pub max_elements: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: DEFAULT_MAX_VERTICES,
            max_elements: DEFAULT_MAX_ELEMENTS,
        }
    }
}

impl Limits {
    /// Defaults, with the vertex cap taken from `ORBITAL_FORGE_MAX_VERTICES` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(MAX_VERTICES_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.max_vertices = cap;
        }
        limits
    }

    pub fn with_max_vertices(mut self, cap: usize) -> Self {
        self.max_vertices = cap;
        self
    }
}
