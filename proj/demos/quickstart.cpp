// Runs one dropout episode under the reactive allocator and prints what
// happened, tick events included. Build target: demo_quickstart.
#include <iostream>

#include <drama/drama.hpp>

int main() {
  const std::string path = std::string(DRAMA_FIXTURES_DIR) + "/dropout_default.json";
  drama::ScenarioSpec spec = drama::load_scenario(path);
  spec.allocator = drama::AllocatorKind::Drama;
  spec.seed = 1;

  drama::EpisodeResult r = drama::run_episode(spec, drama::derive_seed(spec.seed, 0));

  std::cout << "scenario " << spec.name << "\n"
            << "  success " << (r.success ? "yes" : "no") << "\n"
            << "  agent dropped at tick " << r.change_tick << ": agent "
            << r.dropped_agent << "\n"
            << "  ticks used " << r.ticks_used << "\n"
            << "  active steps (finisher " << r.finisher << ") " << r.as << "\n"
            << "  team steps " << r.ts << "\n"
            << "  assignment epochs " << r.assignment_epochs << "\n"
            << "  events seen:\n";
  for (const drama::TriggerEvent& e : r.events) {
    std::cout << "    t=" << e.tick << " " << drama::to_string(e.kind) << " "
              << drama::to_string(e.subject) << "\n";
  }
  return r.success ? 0 : 1;
}
