#pragma once

#include "bwg/rational.hpp"
#include "bwg/game_model.hpp"
#include "bwg/oneshot.hpp"
#include "bwg/mdp.hpp"
#include "bwg/concurrent.hpp"
#include "bwg/repeated.hpp"
#include "bwg/machine.hpp"
#include "bwg/verify.hpp"
#include "bwg/certify.hpp"
#include "bwg/equilibrium.hpp"
#include "bwg/io.hpp"
