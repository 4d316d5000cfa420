use std::fs;
use std::path::{Path, PathBuf};

use xrt_core::scene::{parse_values, Scene, SceneFile};
use xrt_core::tiling::{validate_tiling, Tiling, TilingFile};

use crate::error::CliError;
use crate::SceneArgs;

/// Monte Carlo samples used when validating an input tiling.
const COVERAGE_SAMPLES: usize = 4000;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// A scene with its tiling and the file's own references resolved.
pub struct Loaded {
    pub scene: Scene,
    pub tiling: Tiling,
    file: SceneFile,
    base: PathBuf,
}

impl Loaded {
    /// Values from `explicit`, falling back to the scene's `values` entry.
    pub fn values(&self, explicit: Option<&Path>) -> Result<Vec<f64>, CliError> {
        let path = match (explicit, &self.file.values) {
            (Some(p), _) => p.to_path_buf(),
            (None, Some(rel)) => self.base.join(rel),
            (None, None) => {
                return Err(CliError::Invalid(
                    "no values given (--values or scene `values`)".into(),
                ))
            }
        };
        let values = parse_values(&read(&path)?)?;
        if values.len() != self.tiling.len() {
            return Err(CliError::Invalid(format!(
                "{} has {} values for {} triangles",
                path.display(),
                values.len(),
                self.tiling.len()
            )));
        }
        Ok(values)
    }
}

pub fn load(args: &SceneArgs) -> Result<Loaded, CliError> {
    let file = SceneFile::parse(&read(&args.scene)?)?;
    let scene = file.scene()?;
    let base = args
        .scene
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let tiling_path = match (&args.tiling, &file.tiling) {
        (Some(p), _) => p.clone(),
        (None, Some(rel)) => base.join(rel),
        (None, None) => {
            return Err(CliError::Invalid(
                "no tiling given (--tiling or scene `tiling`)".into(),
            ))
        }
    };
    let tiling_file: TilingFile = serde_json::from_str(&read(&tiling_path)?)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", tiling_path.display())))?;
    let tiling = Tiling::from_file(&tiling_file, scene.domain.clone())?;
    let report = validate_tiling(&tiling, &scene.domain, COVERAGE_SAMPLES, 0);
    if let Some(v) = report.violations.first() {
        return Err(CliError::Invalid(format!(
            "{}: invalid tiling ({} violations; first: {:?} {})",
            tiling_path.display(),
            report.violations.len(),
            v.kind,
            v.detail
        )));
    }
    Ok(Loaded {
        scene,
        tiling,
        file,
        base,
    })
}
