//! A* versus Dijkstra on a grid graph and on a triangle-mesh graph.

use gameagent::nav::{NavGraph, Search, TriangleMesh};
use gameagent::world::Pos;

const MAP: &str = "\
..........
.######...
......#...
.####.#.##
....#.#...
.##.#.###.
..#.......
";

const MESH: &str = "\
# two squares side by side, two triangles each
v 0 0
v 1 0
v 2 0
v 0 1
v 1 1
v 2 1
t 0 1 4
t 0 4 3
t 1 2 5
t 1 5 4
";

fn main() {
    let grid: Vec<Vec<bool>> = MAP.lines().map(|l| l.chars().map(|c| c == '.').collect()).collect();
    let g = NavGraph::from_grid(&grid).expect("rectangular map");
    let (src, dst) = (g.node_at(Pos::new(0, 0)).unwrap(), g.node_at(Pos::new(9, 6)).unwrap());
    for search in [Search::AStar, Search::Dijkstra] {
        let out = g.find_path_with(src, dst, search).unwrap();
        let path = out.path.expect("connected");
        println!("{search:?}: cost {} with {} expansions", path.cost, out.expansions);
    }
    let path = g.find_path(src, dst).unwrap().unwrap();
    let cells: Vec<String> = path.nodes.iter().map(|&n| g.cell(n).unwrap().to_string()).collect();
    println!("route {}", cells.join(" "));

    let mesh = TriangleMesh::parse(MESH).expect("valid mesh");
    let m = NavGraph::from_mesh(&mesh).unwrap();
    let p = m.find_path(0, 2).unwrap().expect("triangles share edges");
    println!("mesh: {} nodes, {} edges, path {:?} cost {:.3}", m.node_count(), m.edge_count(), p.nodes, p.cost);
}
