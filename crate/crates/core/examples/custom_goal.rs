//! A hand-written goal structure: press a button, then cross the door it opens.

use gameagent::agent::tactics::{explore, navigate_to, reach_and_press};
use gameagent::agent::{GoalStructure, Tactic, TestAgent};
use gameagent::games::maze::PRESS;
use gameagent::games::ButtonMaze;
use gameagent::world::Pos;

const LEVEL: &str = "\
w,w,w,w,w,w,w,w
w,f,b0,f,d0,f,f,w
w,f,f,f,w,f,f,w
w,w,w,w,w,w,w,w

b0,d0
";

fn main() {
    let mut maze = ButtonMaze::load_csv(LEVEL).expect("valid level");
    let beyond = Pos::new(6, 2);
    let goal = GoalStructure::seq(vec![
        GoalStructure::goal("b0 pressed", |b| b.world.entity("b0").and_then(|e| e.int("pressCount")) >= Some(1), reach_and_press("b0", PRESS), 50),
        GoalStructure::goal(
            "past the door",
            move |b| b.position() == beyond,
            Tactic::first_of(vec![navigate_to(beyond), explore(), Tactic::Abort]),
            50,
        ),
    ]);
    let mut agent = TestAgent::new("agent", 0).with_goal(goal);
    let summary = agent.run(&mut maze, 200).expect("no game errors");
    println!("{summary:?}");
    for step in agent.trace() {
        println!(
            "cycle {:>2} key {:?} at {} goal {}",
            step.cycle,
            step.command,
            step.snapshot.position,
            step.goal.as_deref().unwrap_or("-")
        );
    }
}
