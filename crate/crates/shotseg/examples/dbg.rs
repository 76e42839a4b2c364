use shotseg::config::Config;
use shotseg::ingest::GrayFrame;
use shotseg::pipeline::detect_shots;
use shotseg::synth::three_shot_spec;

fn main() {
    let spec = three_shot_spec();
    let frames: Vec<GrayFrame> = spec
        .render_frames()
        .into_iter()
        .enumerate()
        .map(|(i, p)| GrayFrame::new(i, p))
        .collect();
    let det = detect_shots(&frames, &Config::default()).unwrap();
    println!("segments: {:?}", det.segmentation.segments);
    println!("transitions: {:?}", det.segmentation.transitions());
    for i in [0usize, 49, 50, 51, 99, 100, 101] {
        let r = &det.rms[i];
        println!("frame {i} sizes {:?} row0 {:?}", r.cluster_sizes, &r.rm.row(0).to_vec()[..6]);
    }
}
