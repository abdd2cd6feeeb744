use crate::geometry::Vec2;

use super::env::Environment;

/// One link/obstacle proximity pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub link: usize,
    pub obstacle: usize,
    /// Point on the link centre line closest to the obstacle.
    pub point: Vec2,
    /// Unit normal from the obstacle surface toward the link.
    pub normal: Vec2,
    pub penetration: f64,
}

/// All contacts between a chain of links (given by its `n + 1` joint
/// positions) and the environment. Links are treated as thin segments.
pub fn antenna_contacts(endpoints: &[Vec2], env: &Environment) -> Vec<Contact> {
    chain_contacts(endpoints, 0.0, env)
}

/// Like [`antenna_contacts`] but with each link inflated to a capsule of
/// the given radius.
pub fn chain_contacts(endpoints: &[Vec2], radius: f64, env: &Environment) -> Vec<Contact> {
    let mut out = Vec::new();
    for (link, pair) in endpoints.windows(2).enumerate() {
        for (obstacle, obs) in env.obstacles.iter().enumerate() {
            if let Some(hit) = obs.segment_hit(pair[0], pair[1], radius) {
                out.push(Contact {
                    link,
                    obstacle,
                    point: hit.point,
                    normal: hit.normal,
                    penetration: hit.penetration,
                });
            }
        }
    }
    out
}
