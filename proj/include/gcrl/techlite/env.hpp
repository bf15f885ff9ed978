#pragma once

#include <algorithm>
#include <array>
#include <bitset>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/core/rng.hpp"
#include "gcrl/techlite/types.hpp"

namespace gcrl::techlite {

inline constexpr int kMaxEnergy = 9;
inline constexpr int kEnergyDecayInterval = 30;
inline constexpr int kPlantRipeAge = 20;
inline constexpr double kSaplingChance = 0.1;
inline constexpr int kMaxWorldgenAttempts = 256;

inline constexpr int kCowHealth = 3;
inline constexpr int kZombieHealth = 5;
inline constexpr int kSkeletonHealth = 3;

struct WorldSize {
  int width = 16;
  int height = 16;
};

struct TechEvent {
  enum class Kind : std::uint8_t { AchievementUnlocked, ResourceCollected };
  Kind kind = Kind::AchievementUnlocked;
  Achievement achievement = Achievement::CollectWood;  // AchievementUnlocked
  Resource resource = Resource::Wood;                  // ResourceCollected
  int count = 0;

  static TechEvent unlocked(Achievement a) { return {Kind::AchievementUnlocked, a, Resource::Wood, 0}; }
  static TechEvent collected(Resource r, int n = 1) {
    return {Kind::ResourceCollected, Achievement::CollectWood, r, n};
  }
  friend bool operator==(const TechEvent&, const TechEvent&) = default;
};

// Full snapshot of the world state as seen by the agent.
struct TechObservation {
  int width = 0;
  int height = 0;
  std::vector<Tile> tiles;
  std::vector<Creature> creatures;
  std::vector<std::uint8_t> plant_ripe;
  Pos agent;
  Facing facing = Facing::South;
  std::array<int, kNumItems> inventory{};
  int energy = kMaxEnergy;
  bool sleeping = false;
  std::bitset<kNumAchievements> unlocked;

  Tile tile(Pos p) const { return tiles[static_cast<std::size_t>(p.y * width + p.x)]; }
  Creature creature(Pos p) const { return creatures[static_cast<std::size_t>(p.y * width + p.x)]; }
  bool inside(Pos p) const { return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height; }

  friend bool operator==(const TechObservation&, const TechObservation&) = default;
};

struct TechStep {
  TechObservation obs;
  std::vector<TechEvent> events;
  double env_reward = 0.0;
};

inline bool walkable(Tile t) { return t == Tile::Grass || t == Tile::Path; }

// Minimal Crafter-like survival world: a tech tree over 22 achievements with
// stationary creatures and an energy/sleep cycle.
class TechEnv {
 public:
  TechObservation reset(std::uint64_t seed, WorldSize size = {}) {
    if (size.width < 8 || size.height < 8) throw ConfigError("techlite world must be at least 8x8");
    size_ = size;
    Rng gen(derive_seed(seed, 0x7ec4));
    bool ok = false;
    for (int attempt = 0; attempt < kMaxWorldgenAttempts && !ok; ++attempt) {
      generate(gen);
      ok = reachable_resources();
    }
    if (!ok) throw Error("techlite world generation failed to satisfy reachability");
    rng_ = Rng(derive_seed(seed, 0x51ee));
    inventory_.fill(0);
    energy_ = kMaxEnergy;
    sleeping_ = false;
    steps_ = 0;
    unlocked_.reset();
    active_ = true;
    return observe();
  }

  TechStep step(TechAction action) {
    if (!active_) throw std::logic_error("TechEnv::step called before reset");
    TechStep out;
    ++steps_;
    if (sleeping_) {
      energy_ = std::min(kMaxEnergy, energy_ + 1);
      if (energy_ == kMaxEnergy) {
        sleeping_ = false;
        unlock(Achievement::WakeUp, out);
      }
    } else {
      act(action, out);
      if (steps_ % kEnergyDecayInterval == 0) energy_ = std::max(0, energy_ - 1);
    }
    for (std::size_t i = 0; i < tiles_.size(); ++i) {
      if (tiles_[i] == Tile::Plant && plant_age_[i] < kPlantRipeAge) ++plant_age_[i];
    }
    out.obs = observe();
    return out;
  }

  TechObservation observe() const {
    TechObservation o;
    o.width = size_.width;
    o.height = size_.height;
    o.tiles = tiles_;
    o.creatures = creatures_;
    o.plant_ripe.resize(tiles_.size());
    for (std::size_t i = 0; i < tiles_.size(); ++i) {
      o.plant_ripe[i] = tiles_[i] == Tile::Plant && plant_age_[i] >= kPlantRipeAge ? 1 : 0;
    }
    o.agent = agent_;
    o.facing = facing_;
    o.inventory = inventory_;
    o.energy = energy_;
    o.sleeping = sleeping_;
    o.unlocked = unlocked_;
    return o;
  }

  WorldSize size() const { return size_; }
  Pos agent() const { return agent_; }
  Facing facing() const { return facing_; }
  int item(Item it) const { return inventory_[static_cast<std::size_t>(it)]; }
  int energy() const { return energy_; }
  bool sleeping() const { return sleeping_; }
  Tile tile(Pos p) const { return tiles_[index(p)]; }
  Creature creature(Pos p) const { return creatures_[index(p)]; }
  bool inside(Pos p) const { return p.x >= 0 && p.y >= 0 && p.x < size_.width && p.y < size_.height; }
  bool nearby(Tile kind) const {
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const Pos p = agent_ + Pos{dx, dy};
        if (inside(p) && tile(p) == kind) return true;
      }
    return false;
  }

 private:
  std::size_t index(Pos p) const { return static_cast<std::size_t>(p.y * size_.width + p.x); }
  int& inv(Item it) { return inventory_[static_cast<std::size_t>(it)]; }

  void unlock(Achievement a, TechStep& out) {
    out.events.push_back(TechEvent::unlocked(a));
    if (!unlocked_.test(static_cast<std::size_t>(a))) {
      unlocked_.set(static_cast<std::size_t>(a));
      out.env_reward += 1.0;
    }
  }

  void collect(Resource r, Item it, Achievement a, TechStep& out) {
    ++inv(it);
    out.events.push_back(TechEvent::collected(r));
    unlock(a, out);
  }

  int damage() const {
    if (item(Item::IronSword) > 0) return 5;
    if (item(Item::StoneSword) > 0) return 3;
    if (item(Item::WoodSword) > 0) return 2;
    return 1;
  }

  void act(TechAction action, TechStep& out) {
    switch (action) {
      case TechAction::Noop: return;
      case TechAction::MoveWest: move(Facing::West); return;
      case TechAction::MoveEast: move(Facing::East); return;
      case TechAction::MoveNorth: move(Facing::North); return;
      case TechAction::MoveSouth: move(Facing::South); return;
      case TechAction::Do: interact(out); return;
      case TechAction::Sleep:
        if (energy_ < kMaxEnergy) sleeping_ = true;
        return;
      case TechAction::PlaceStone: place(Tile::Stone, out); return;
      case TechAction::PlaceTable: place(Tile::Table, out); return;
      case TechAction::PlaceFurnace: place(Tile::Furnace, out); return;
      case TechAction::PlacePlant: place(Tile::Plant, out); return;
      case TechAction::MakeWoodPickaxe: make(Item::WoodPickaxe, out); return;
      case TechAction::MakeStonePickaxe: make(Item::StonePickaxe, out); return;
      case TechAction::MakeIronPickaxe: make(Item::IronPickaxe, out); return;
      case TechAction::MakeWoodSword: make(Item::WoodSword, out); return;
      case TechAction::MakeStoneSword: make(Item::StoneSword, out); return;
      case TechAction::MakeIronSword: make(Item::IronSword, out); return;
    }
  }

  void move(Facing f) {
    facing_ = f;
    const Pos next = agent_ + facing_offset(f);
    if (inside(next) && walkable(tile(next)) && creature(next) == Creature::None) agent_ = next;
  }

  void interact(TechStep& out) {
    const Pos t = agent_ + facing_offset(facing_);
    if (!inside(t)) return;
    const std::size_t i = index(t);
    if (creatures_[i] != Creature::None) {
      health_[i] -= damage();
      if (health_[i] <= 0) {
        const Creature c = creatures_[i];
        creatures_[i] = Creature::None;
        health_[i] = 0;
        if (c == Creature::Cow) unlock(Achievement::EatCow, out);
        if (c == Creature::Zombie) unlock(Achievement::DefeatZombie, out);
        if (c == Creature::Skeleton) unlock(Achievement::DefeatSkeleton, out);
      }
      return;
    }
    switch (tiles_[i]) {
      case Tile::Tree: collect(Resource::Wood, Item::Wood, Achievement::CollectWood, out); return;
      case Tile::Stone:
        if (item(Item::WoodPickaxe) > 0) {
          tiles_[i] = Tile::Path;
          collect(Resource::Stone, Item::Stone, Achievement::CollectStone, out);
        }
        return;
      case Tile::Coal:
        if (item(Item::WoodPickaxe) > 0) {
          tiles_[i] = Tile::Path;
          collect(Resource::Coal, Item::Coal, Achievement::CollectCoal, out);
        }
        return;
      case Tile::Iron:
        if (item(Item::StonePickaxe) > 0) {
          tiles_[i] = Tile::Path;
          collect(Resource::Iron, Item::Iron, Achievement::CollectIron, out);
        }
        return;
      case Tile::Diamond:
        if (item(Item::IronPickaxe) > 0) {
          tiles_[i] = Tile::Path;
          collect(Resource::Diamond, Item::Diamond, Achievement::CollectDiamond, out);
        }
        return;
      case Tile::Water:
        out.events.push_back(TechEvent::collected(Resource::Drink));
        unlock(Achievement::CollectDrink, out);
        return;
      case Tile::Grass:
        if (rng_.bernoulli(kSaplingChance)) collect(Resource::Sapling, Item::Sapling, Achievement::CollectSapling, out);
        return;
      case Tile::Plant:
        if (plant_age_[i] >= kPlantRipeAge) {
          tiles_[i] = Tile::Grass;
          plant_age_[i] = 0;
          unlock(Achievement::EatPlant, out);
        }
        return;
      default: return;
    }
  }

  void place(Tile what, TechStep& out) {
    const Pos t = agent_ + facing_offset(facing_);
    if (!inside(t) || creature(t) != Creature::None) return;
    const Tile under = tile(t);
    switch (what) {
      case Tile::Stone:
        if (item(Item::Stone) < 1 || !(walkable(under) || under == Tile::Water)) return;
        --inv(Item::Stone);
        tiles_[index(t)] = Tile::Stone;
        unlock(Achievement::PlaceStone, out);
        return;
      case Tile::Table:
        if (item(Item::Wood) < 1 || !walkable(under)) return;
        --inv(Item::Wood);
        tiles_[index(t)] = Tile::Table;
        unlock(Achievement::PlaceTable, out);
        return;
      case Tile::Furnace:
        if (item(Item::Stone) < 1 || !walkable(under) || !nearby(Tile::Table)) return;
        --inv(Item::Stone);
        tiles_[index(t)] = Tile::Furnace;
        unlock(Achievement::PlaceFurnace, out);
        return;
      case Tile::Plant:
        if (item(Item::Sapling) < 1 || under != Tile::Grass) return;
        --inv(Item::Sapling);
        tiles_[index(t)] = Tile::Plant;
        plant_age_[index(t)] = 0;
        unlock(Achievement::PlacePlant, out);
        return;
      default: return;
    }
  }

  void make(Item tool, TechStep& out) {
    if (!nearby(Tile::Table)) return;
    const bool iron = tool == Item::IronPickaxe || tool == Item::IronSword;
    const bool stone = tool == Item::StonePickaxe || tool == Item::StoneSword;
    if (iron && !nearby(Tile::Furnace)) return;
    if (item(Item::Wood) < 1) return;
    if (stone && item(Item::Stone) < 1) return;
    if (iron && (item(Item::Coal) < 1 || item(Item::Iron) < 1)) return;
    --inv(Item::Wood);
    if (stone) --inv(Item::Stone);
    if (iron) {
      --inv(Item::Coal);
      --inv(Item::Iron);
    }
    ++inv(tool);
    switch (tool) {
      case Item::WoodPickaxe: unlock(Achievement::MakeWoodPickaxe, out); break;
      case Item::StonePickaxe: unlock(Achievement::MakeStonePickaxe, out); break;
      case Item::IronPickaxe: unlock(Achievement::MakeIronPickaxe, out); break;
      case Item::WoodSword: unlock(Achievement::MakeWoodSword, out); break;
      case Item::StoneSword: unlock(Achievement::MakeStoneSword, out); break;
      case Item::IronSword: unlock(Achievement::MakeIronSword, out); break;
      default: break;
    }
  }

  // Random-walk blob of `n` cells starting near `start`, painted with `kind`
  // over grass. Returns the painted cells.
  std::vector<Pos> blob(Rng& gen, Pos start, int n, Tile kind) {
    std::vector<Pos> painted;
    Pos p = start;
    for (int guard = 0; static_cast<int>(painted.size()) < n && guard < n * 20; ++guard) {
      if (inside(p) && tile(p) == Tile::Grass) {
        tiles_[index(p)] = kind;
        painted.push_back(p);
      }
      static constexpr std::array<Pos, 4> kSteps = {Pos{1, 0}, Pos{-1, 0}, Pos{0, 1}, Pos{0, -1}};
      Pos next = p + kSteps[gen.below(4)];
      if (!inside(next)) next = painted.empty() ? start : painted[gen.below(painted.size())];
      p = next;
    }
    return painted;
  }

  Pos random_pos(Rng& gen) const {
    return {static_cast<int>(gen.below(static_cast<std::uint64_t>(size_.width))),
            static_cast<int>(gen.below(static_cast<std::uint64_t>(size_.height)))};
  }

  void generate(Rng& gen) {
    const std::size_t n = static_cast<std::size_t>(size_.width * size_.height);
    tiles_.assign(n, Tile::Grass);
    creatures_.assign(n, Creature::None);
    health_.assign(n, 0);
    plant_age_.assign(n, 0);
    const int area = size_.width * size_.height;
    const auto scaled = [&](int per256) { return std::max(1, per256 * area / 256); };

    blob(gen, random_pos(gen), scaled(8), Tile::Water);
    std::vector<Pos> rock = blob(gen, random_pos(gen), scaled(36), Tile::Stone);
    const auto sprinkle = [&](Tile kind, int count) {
      for (int k = 0; k < count && !rock.empty(); ++k) {
        const std::size_t j = gen.below(rock.size());
        tiles_[index(rock[j])] = kind;
        rock.erase(rock.begin() + static_cast<std::ptrdiff_t>(j));
      }
    };
    sprinkle(Tile::Coal, scaled(4));
    sprinkle(Tile::Iron, scaled(3));
    sprinkle(Tile::Diamond, scaled(2));

    const auto free_grass = [&](Pos p) { return tile(p) == Tile::Grass && creature(p) == Creature::None; };
    const auto scatter = [&](int count, auto&& paint) {
      for (int k = 0, guard = 0; k < count && guard < 1000; ++guard) {
        const Pos p = random_pos(gen);
        if (!free_grass(p)) continue;
        paint(p);
        ++k;
      }
    };
    scatter(scaled(14), [&](Pos p) { tiles_[index(p)] = Tile::Tree; });
    const auto spawn_creature = [&](Creature c, int hp) {
      return [&, c, hp](Pos p) {
        creatures_[index(p)] = c;
        health_[index(p)] = hp;
      };
    };
    scatter(scaled(3), spawn_creature(Creature::Cow, kCowHealth));
    scatter(scaled(2), spawn_creature(Creature::Zombie, kZombieHealth));
    scatter(scaled(2), spawn_creature(Creature::Skeleton, kSkeletonHealth));

    agent_ = {-1, -1};
    for (int guard = 0; guard < 1000; ++guard) {
      const Pos p = random_pos(gen);
      if (free_grass(p)) {
        agent_ = p;
        break;
      }
    }
    facing_ = Facing::South;
  }

  // Every resource tile kind and creature kind must border the region the
  // agent can walk to without mining, and there must be room to build.
  bool reachable_resources() const {
    if (!inside(agent_)) return false;
    std::vector<std::uint8_t> seen(tiles_.size(), 0);
    std::deque<Pos> queue{agent_};
    seen[index(agent_)] = 1;
    int free_cells = 0;
    std::bitset<kNumTiles> tile_kinds;
    std::array<bool, 4> creature_kinds{};
    static constexpr std::array<Pos, 4> kSteps = {Pos{1, 0}, Pos{-1, 0}, Pos{0, 1}, Pos{0, -1}};
    while (!queue.empty()) {
      const Pos p = queue.front();
      queue.pop_front();
      ++free_cells;
      for (const Pos& d : kSteps) {
        const Pos q = p + d;
        if (!inside(q)) continue;
        tile_kinds.set(static_cast<std::size_t>(tile(q)));
        creature_kinds[static_cast<std::size_t>(creature(q))] = true;
        if (seen[index(q)] || !walkable(tile(q)) || creature(q) != Creature::None) continue;
        seen[index(q)] = 1;
        queue.push_back(q);
      }
    }
    for (Tile t : {Tile::Tree, Tile::Water, Tile::Stone, Tile::Coal, Tile::Iron, Tile::Diamond}) {
      if (!tile_kinds.test(static_cast<std::size_t>(t))) return false;
    }
    for (Creature c : {Creature::Cow, Creature::Zombie, Creature::Skeleton}) {
      if (!creature_kinds[static_cast<std::size_t>(c)]) return false;
    }
    return free_cells >= 12;
  }

  WorldSize size_;
  std::vector<Tile> tiles_;
  std::vector<Creature> creatures_;
  std::vector<int> health_;
  std::vector<int> plant_age_;
  Pos agent_;
  Facing facing_ = Facing::South;
  std::array<int, kNumItems> inventory_{};
  int energy_ = kMaxEnergy;
  bool sleeping_ = false;
  int steps_ = 0;
  std::bitset<kNumAchievements> unlocked_;
  Rng rng_;
  bool active_ = false;
};

// Egocentric 5x5 tile/creature one-hot window, a nearest-instance compass for
// key tile and creature kinds, inventory, energy and facing.
inline constexpr int kViewRadius = 2;
inline constexpr int kViewCategories = kNumTiles + 1 /*ripe plant*/ + 3 /*creatures*/ + 1 /*outside*/;
inline constexpr int kCompassKinds = 11;
inline constexpr int kObservationFeatures =
    (2 * kViewRadius + 1) * (2 * kViewRadius + 1) * kViewCategories + kCompassKinds * 3 + kNumItems + 2 + 4 + 2;

inline void observation_features(const TechObservation& obs, std::vector<double>& out) {
  for (int dy = -kViewRadius; dy <= kViewRadius; ++dy) {
    for (int dx = -kViewRadius; dx <= kViewRadius; ++dx) {
      const Pos p = obs.agent + Pos{dx, dy};
      int category;
      if (!obs.inside(p)) {
        category = kViewCategories - 1;
      } else if (obs.creature(p) != Creature::None) {
        category = kNumTiles + static_cast<int>(obs.creature(p));  // 12..14
      } else if (obs.tile(p) == Tile::Plant && obs.plant_ripe[static_cast<std::size_t>(p.y * obs.width + p.x)]) {
        category = kNumTiles;
      } else {
        category = static_cast<int>(obs.tile(p));
      }
      for (int c = 0; c < kViewCategories; ++c) out.push_back(c == category ? 1.0 : 0.0);
    }
  }
  // Compass: offset to the nearest instance (Manhattan), plus an exists flag.
  const auto compass = [&](auto&& match) {
    int best = -1;
    Pos best_pos;
    for (int y = 0; y < obs.height; ++y)
      for (int x = 0; x < obs.width; ++x) {
        const Pos p{x, y};
        if (!match(p)) continue;
        const int d = std::abs(x - obs.agent.x) + std::abs(y - obs.agent.y);
        if (best < 0 || d < best) {
          best = d;
          best_pos = p;
        }
      }
    if (best < 0) {
      out.insert(out.end(), {0.0, 0.0, 0.0});
    } else {
      out.push_back((best_pos.x - obs.agent.x) / double(obs.width));
      out.push_back((best_pos.y - obs.agent.y) / double(obs.height));
      out.push_back(1.0);
    }
  };
  for (Tile t : {Tile::Tree, Tile::Water, Tile::Stone, Tile::Coal, Tile::Iron, Tile::Diamond, Tile::Table,
                 Tile::Furnace}) {
    compass([&](Pos p) { return obs.tile(p) == t && obs.creature(p) == Creature::None; });
  }
  for (Creature c : {Creature::Cow, Creature::Zombie, Creature::Skeleton}) {
    compass([&](Pos p) { return obs.creature(p) == c; });
  }
  for (int v : obs.inventory) out.push_back(std::min(v, 9) / 9.0);
  out.push_back(obs.energy / double(kMaxEnergy));
  out.push_back(obs.sleeping ? 1.0 : 0.0);
  for (int f = 0; f < 4; ++f) out.push_back(static_cast<int>(obs.facing) == f ? 1.0 : 0.0);
  const auto near = [&](Tile kind) {
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const Pos p = obs.agent + Pos{dx, dy};
        if (obs.inside(p) && obs.tile(p) == kind) return 1.0;
      }
    return 0.0;
  };
  out.push_back(near(Tile::Table));
  out.push_back(near(Tile::Furnace));
}

}  // namespace gcrl::techlite
