//! Lists the conventions the crate adopts where the usual printed forms disagree.

fn main() {
    for c in marcumq::conventions::CONVENTIONS {
        println!("{}\n  {}\n  adopted:  {}\n  rejected: {}\n  evidence: {}\n", c.id, c.quantity, c.adopted, c.rejected, c.evidence);
    }
}
