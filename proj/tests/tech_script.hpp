#pragma once

// Scripted navigation helpers for techlite tests.

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "gcrl/techlite/env.hpp"

namespace gcrl::script {

using techlite::Facing;
using techlite::Pos;
using techlite::TechAction;
using techlite::TechEnv;
using techlite::TechEvent;

inline TechAction move_action(Facing f) { return static_cast<TechAction>(1 + static_cast<int>(f)); }

inline bool free_cell(const TechEnv& env, Pos p) {
  return env.inside(p) && techlite::walkable(env.tile(p)) && env.creature(p) == techlite::Creature::None;
}

struct Recorder {
  TechEnv* env;
  std::vector<TechEvent> events;
  std::vector<TechAction> actions;
  double reward = 0.0;

  void step(TechAction a) {
    actions.push_back(a);
    auto s = env->step(a);
    events.insert(events.end(), s.events.begin(), s.events.end());
    reward += s.env_reward;
  }
};

// Walks to a cell and turns so that the faced cell satisfies `target`, with
// the standing cell satisfying `stand`. Returns false if no such spot is
// reachable.
inline bool face(Recorder& rec, const std::function<bool(Pos)>& target,
                 const std::function<bool(Pos)>& stand = [](Pos) { return true; }) {
  const TechEnv& env = *rec.env;
  static constexpr Facing kDirs[] = {Facing::West, Facing::East, Facing::North, Facing::South};
  std::map<std::pair<int, int>, std::pair<Pos, Facing>> parent;
  std::deque<Pos> queue{env.agent()};
  parent[{env.agent().x, env.agent().y}] = {env.agent(), Facing::South};
  while (!queue.empty()) {
    const Pos p = queue.front();
    queue.pop_front();
    for (Facing d : kDirs) {
      const Pos a = p + techlite::facing_offset(d);
      if (!env.inside(a)) continue;
      // Moving toward a blocked cell only turns; toward a free cell it enters.
      const bool enters = free_cell(env, a);
      const Pos standing = enters ? a : p;
      const Pos faced = enters ? a + techlite::facing_offset(d) : a;
      if (!env.inside(faced) || !target(faced) || !stand(standing)) continue;
      std::vector<TechAction> path;
      for (Pos c = p; !(c == env.agent());) {
        const auto& [prev, f] = parent.at({c.x, c.y});
        path.push_back(move_action(f));
        c = prev;
      }
      for (auto it = path.rbegin(); it != path.rend(); ++it) rec.step(*it);
      rec.step(move_action(d));
      return rec.env->agent() == standing && rec.env->facing() == d;
    }
    for (Facing d : kDirs) {
      const Pos n = p + techlite::facing_offset(d);
      if (!free_cell(env, n) || parent.count({n.x, n.y})) continue;
      parent[{n.x, n.y}] = {p, d};
      queue.push_back(n);
    }
  }
  return false;
}

inline std::function<bool(Pos)> tile_is(const TechEnv& env, techlite::Tile t) {
  return [&env, t](Pos p) { return env.tile(p) == t && env.creature(p) == techlite::Creature::None; };
}

// Scripted run up the tech tree to a diamond. Returns false when the world
// layout defeats the simple script.
inline bool run_to_diamond(Recorder& rec) {
  using techlite::Item;
  using techlite::Tile;
  TechEnv& env = *rec.env;
  const auto grass = [&](Pos p) { return env.tile(p) == Tile::Grass && env.creature(p) == techlite::Creature::None; };
  const auto near = [&](Tile t) {
    return [&env, t](Pos s) {
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const Pos q = s + Pos{dx, dy};
          if (env.inside(q) && env.tile(q) == t) return true;
        }
      return false;
    };
  };
  const auto mine = [&](Tile t, Item it, int n) {
    for (int k = 0; k < n; ++k) {
      if (!face(rec, tile_is(env, t))) return false;
      const int before = env.item(it);
      rec.step(TechAction::Do);
      if (env.item(it) != before + 1) return false;
    }
    return true;
  };

  if (!face(rec, tile_is(env, Tile::Tree))) return false;
  for (int k = 0; k < 6; ++k) rec.step(TechAction::Do);
  if (!face(rec, grass)) return false;
  rec.step(TechAction::PlaceTable);
  rec.step(TechAction::MakeWoodPickaxe);
  if (env.item(Item::WoodPickaxe) != 1) return false;
  if (!mine(Tile::Stone, Item::Stone, 3)) return false;
  if (!face(rec, tile_is(env, Tile::Table))) return false;
  rec.step(TechAction::MakeStonePickaxe);
  if (!face(rec, grass, near(Tile::Table))) return false;
  rec.step(TechAction::PlaceFurnace);
  if (!mine(Tile::Coal, Item::Coal, 1) || !mine(Tile::Iron, Item::Iron, 1)) return false;
  if (!face(rec, tile_is(env, Tile::Furnace), near(Tile::Table))) return false;
  rec.step(TechAction::MakeIronPickaxe);
  if (env.item(Item::IronPickaxe) != 1) return false;
  return mine(Tile::Diamond, Item::Diamond, 1);
}

}  // namespace gcrl::script
