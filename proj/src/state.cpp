#include "dnde/state.hpp"

#include "dnde/error.hpp"

namespace dnde {

double mass(const State& state) {
  if (!state.grid) throw Error(ErrorKind::BadMesh, "state has no grid");
  return integrate(*state.grid, state.u);
}

}  // namespace dnde
