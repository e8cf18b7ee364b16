#pragma once

namespace slcone {

// Every data-parallel kernel has a plain serial loop kept as the reference
// implementation; `parallel` runs the same per-element code under OpenMP.
enum class Exec { serial, parallel };

}  // namespace slcone
