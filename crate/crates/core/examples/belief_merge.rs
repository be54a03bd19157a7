//! How observations fold into a belief: replacement, stale entries and tombstones.

use gameagent::world::{Pos, WorldEntity, WorldModel};

fn show(label: &str, w: &WorldModel) {
    println!("{label} (t={})", w.timestamp);
    for e in w.entities.values() {
        println!("  {} {} at {} t={} alive={}", e.id, e.entity_type, e.position, e.timestamp, e.alive);
    }
}

fn main() {
    let mut belief = WorldModel::new("P1", 0, Pos::new(1, 1));
    let first = WorldModel::new("P1", 1, Pos::new(1, 1))
        .with_entity(WorldEntity::new("M0", "monster", Pos::new(3, 1), 1).with("hp", 5))
        .with_entity(WorldEntity::new("S0", "scroll", Pos::new(4, 4), 1));
    belief.merge_in(&first).unwrap();
    show("after first look", &belief);

    // The monster dies; the scroll is out of view and stays as last seen.
    let second = WorldModel::new("P1", 2, Pos::new(2, 1))
        .with_entity(WorldEntity::new("M0", "monster", Pos::new(3, 1), 2).with("hp", 0).dead());
    belief.merge_in(&second).unwrap();
    show("after the kill", &belief);

    println!("merging it again changes nothing: {}", belief.merge(&second).unwrap() == belief);
    println!("an older observation is refused: {}", belief.merge(&first).unwrap_err());
    println!("alive monsters: {}", belief.of_type("monster", true).count());
}
