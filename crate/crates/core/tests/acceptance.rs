use sievelab::acceptance;

fn main() {
    let outcomes = acceptance::run_all(|o| println!("{}", o.line()));
    let failed: Vec<&str> = outcomes.iter().filter(|o| o.failed()).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all gated criteria passed");
    } else {
        println!("acceptance: failed {}", failed.join(", "));
        std::process::exit(1);
    }
}
