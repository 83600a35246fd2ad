use toricode_core::classify::{classify_box, max_vertex_survey, vertex_cone_key, ClassifyLimits};
use toricode_core::polygon::format_polygon;

fn main() {
    let m: u32 = std::env::args().nth(1).unwrap().parse().unwrap();
    let run = classify_box(m, &ClassifyLimits::default()).unwrap();
    let survey = max_vertex_survey(&run, m);
    println!(
        "m={m} maxv={} attainers={} min_volume={}",
        survey.max_vertices, survey.attainers, survey.min_volume
    );
    for e in run.exact(m) {
        if e.vertices == survey.max_vertices {
            let p = &e.representative;
            let keys: Vec<(i64, i64)> =
                (0..p.vertex_count()).map(|i| vertex_cone_key(p, i)).collect();
            println!("vol={} {} cones={:?}", e.volume, format_polygon(p), keys);
        }
    }
}
