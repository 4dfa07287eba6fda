#pragma once

namespace noondiff::diffusion {

// Encode/selection gradient timing. big_delta is the onset-to-onset spacing
// of the two encode gradients, little_delta their duration. The field is on
// for little_delta * shape_factor, which is the duration entering b.
struct DiffusionTiming {
    double big_delta = 50e-3;  // s
    double little_delta = 2e-3;  // s
    double g1 = 0.0;  // T/m
    double g2 = 0.0;  // T/m
    double g3 = 0.0;  // T/m
    double shape_factor = 1.0;
    double selection_delta = 0.0;  // s, duration of G2/G3; 0 means little_delta

    // Throws std::domain_error for big_delta < little_delta, little_delta <= 0,
    // g1 < 0 or a shape factor outside (0, 1].
    void validate() const;

    double effective_delta() const { return little_delta * shape_factor; }
    double selection_duration() const { return selection_delta > 0.0 ? selection_delta : little_delta; }
};

}  // namespace noondiff::diffusion
