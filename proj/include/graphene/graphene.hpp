#ifndef GRAPHENE_GRAPHENE_HPP
#define GRAPHENE_GRAPHENE_HPP

#include "graphene/aggregator.hpp"
#include "graphene/config.hpp"
#include "graphene/engine.hpp"
#include "graphene/keychain.hpp"
#include "graphene/ootable.hpp"
#include "graphene/primitives.hpp"
#include "graphene/wire.hpp"

#endif
