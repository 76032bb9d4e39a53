//! Small named games used by examples, tests and the bundled fixture files.

use crate::game::{FriendshipGraph, Game, ModelAssignment, PreferenceModel};

/// Edges of the kindergarten story graph over `a..e`: the clique `{a,b,c,d}` plus `a–e`.
pub const STORY_EDGES: [(usize, usize); 7] =
    [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (2, 3)];

pub fn story_graph() -> FriendshipGraph {
    FriendshipGraph::from_edges(5, &STORY_EDGES).expect("static edges are valid")
}

/// The story game with every player using `model`.
pub fn story(model: PreferenceModel) -> Game {
    let labels = ["a", "b", "c", "d", "e"].map(String::from).to_vec();
    if model.is_fractional() {
        return Game::homogeneous(story_graph(), model);
    }
    Game::build(labels, &STORY_EDGES, None, ModelAssignment::Uniform(model))
        .expect("static game is valid")
}

pub fn complete(n: usize, model: PreferenceModel) -> Game {
    Game::homogeneous(FriendshipGraph::complete(n), model)
}

pub fn empty(n: usize, model: PreferenceModel) -> Game {
    Game::homogeneous(FriendshipGraph::empty(n), model)
}
