//! Triangulations given only by their triangles, for surfaces without a
//! geometric model here (positive genus, three or more boundary components).

use std::collections::BTreeMap;

use super::SurfaceError;
use crate::quiver::Quiver;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericTriangulation {
    /// Side labels of each triangle in clockwise order.
    triangles: Vec<[String; 3]>,
    boundary: Vec<String>,
    /// Internal labels in order of first appearance; this is the vertex order.
    arcs: Vec<String>,
}

impl GenericTriangulation {
    /// Every boundary label must occur on exactly one triangle side and
    /// every other label on exactly two sides of different triangles.
    pub fn new(triangles: Vec<[String; 3]>, boundary: Vec<String>) -> Result<Self, SurfaceError> {
        let mut uses: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        let mut arcs = Vec::new();
        for (i, t) in triangles.iter().enumerate() {
            for label in t {
                let entry = uses.entry(label.as_str()).or_default();
                if entry.is_empty() && !boundary.contains(label) {
                    arcs.push(label.clone());
                }
                entry.push(i);
            }
        }
        let invalid = |msg: String| Err(SurfaceError::InvalidSurface(msg));
        for b in &boundary {
            if uses.get(b.as_str()).map_or(0, Vec::len) != 1 {
                return invalid(format!("boundary segment {b:?} must lie on exactly one triangle"));
            }
        }
        for a in &arcs {
            match uses[a.as_str()].as_slice() {
                [x, y] if x != y => {}
                [_, _] => return invalid(format!("arc {a:?} bounds the same triangle twice")),
                _ => return invalid(format!("arc {a:?} must lie on exactly two triangles")),
            }
        }
        if arcs.is_empty() {
            return invalid("a triangulation needs at least one internal arc".into());
        }
        Ok(GenericTriangulation { triangles, boundary, arcs })
    }

    pub fn arcs(&self) -> &[String] {
        &self.arcs
    }

    pub fn triangles(&self) -> &[[String; 3]] {
        &self.triangles
    }

    pub fn boundary(&self) -> &[String] {
        &self.boundary
    }

    fn arc_index(&self, label: &str) -> Option<usize> {
        self.arcs.iter().position(|a| a == label)
    }

    pub fn quiver(&self) -> Quiver {
        let n = self.arcs.len();
        let mut b = vec![vec![0i32; n]; n];
        for t in &self.triangles {
            for r in 0..3 {
                if let (Some(i), Some(j)) = (self.arc_index(&t[r]), self.arc_index(&t[(r + 1) % 3])) {
                    b[i][j] += 1;
                    b[j][i] -= 1;
                }
            }
        }
        Quiver::from_matrix(&b).expect("triangle arrows form a skew-symmetric matrix")
    }

    /// Flips arc `i`. The triangles `(e, a, b)` and `(e, c, d)` become
    /// `(e, b, c)` and `(e, d, a)`; the label `e` now names the new arc.
    pub fn flip(&self, i: usize) -> Result<GenericTriangulation, SurfaceError> {
        let e = self
            .arcs
            .get(i)
            .ok_or_else(|| SurfaceError::ArcNotInTriangulation(format!("#{}", i + 1)))?
            .clone();
        let holders: Vec<usize> = (0..self.triangles.len()).filter(|&t| self.triangles[t].contains(&e)).collect();
        let rotated = |t: usize| {
            let mut tri = self.triangles[t].clone();
            while tri[0] != e {
                tri.rotate_left(1);
            }
            tri
        };
        let [_, a, b] = rotated(holders[0]);
        let [_, c, d] = rotated(holders[1]);
        let mut triangles = self.triangles.clone();
        triangles[holders[0]] = [e.clone(), b, c];
        triangles[holders[1]] = [e, d, a];
        let mut out = GenericTriangulation::new(triangles, self.boundary.clone())?;
        out.arcs = self.arcs.clone();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::presets::linear_a;

    fn labels(t: [&str; 3]) -> [String; 3] {
        t.map(String::from)
    }

    fn pentagon() -> GenericTriangulation {
        // pentagon 1..5 with diagonals a = 1-3 and b = 1-4
        GenericTriangulation::new(
            vec![labels(["a", "s23", "s12"]), labels(["b", "s34", "a"]), labels(["s15", "s45", "b"])],
            ["s12", "s23", "s34", "s45", "s15"].map(String::from).to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn quiver_and_flips() {
        let t = pentagon();
        assert_eq!(t.quiver(), linear_a(2));
        for i in 0..2 {
            let f = t.flip(i).unwrap();
            assert_eq!(f.quiver(), t.quiver().mutate(i).unwrap());
            assert_eq!(f.flip(i).unwrap().quiver(), t.quiver());
        }
    }

    #[test]
    fn annulus_given_by_triangles() {
        // one marked point per boundary; the two triangles share both arcs
        let t = GenericTriangulation::new(
            vec![labels(["u", "v", "o"]), labels(["v", "i", "u"])],
            vec!["o".into(), "i".into()],
        )
        .unwrap();
        let q = t.quiver();
        assert_eq!(q, crate::quiver::presets::kronecker());
        let mut cur = t;
        for step in 0..6 {
            let f = cur.flip(step % 2).unwrap();
            assert_eq!(f.quiver(), cur.quiver().mutate(step % 2).unwrap());
            cur = f;
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(GenericTriangulation::new(vec![labels(["a", "b", "c"])], vec!["b".into(), "c".into()]).is_err());
        assert!(GenericTriangulation::new(vec![labels(["a", "a", "b"])], vec!["b".into()]).is_err());
    }
}
