//! Strips markup from an HTML filing and shows which sentences carry a
//! future-tense marker.
//!
//!     cargo run --example strip_filing -- path/to/filing.htm

use promises::corpus::strip_markup_counted;
use promises::futuretense::{count_future, split_sentences};

const SAMPLE: &str = "<html><body>
<p>Revenue rose 4% in fiscal 1999 &amp; margins held.</p>
<p>We <b>will</b> open two plants. Management is going to review the dividend!</p>
<p>The board shall meet quarterly. Costs fell.</p>
</body></html>";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = match std::env::args().nth(1) {
        Some(path) => String::from_utf8_lossy(&std::fs::read(path)?).into_owned(),
        None => SAMPLE.to_string(),
    };
    let stripped = strip_markup_counted(&raw);
    if stripped.unterminated > 0 {
        eprintln!("warning: unterminated tag; trailing text dropped");
    }
    println!("--- text ---\n{}\n", stripped.text.trim());

    println!("--- sentences ---");
    for s in split_sentences(&stripped.text) {
        let text = s.tokens.join(" ");
        let c = count_future(&text);
        let mark = if c.total() > 0 { "*" } else { " " };
        println!("{mark} {text}");
    }
    let c = count_future(&stripped.text);
    println!(
        "\nwill {}  shall {}  going_to {}  future sentences {}",
        c.will, c.shall, c.going_to, c.future_sentences
    );
    Ok(())
}
