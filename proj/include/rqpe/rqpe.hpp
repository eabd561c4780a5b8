// Copyright 2026 The rqpe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "rqpe/core.hpp"
#include "rqpe/qsim.hpp"
#include "rqpe/hamil.hpp"
#include "rqpe/fermion.hpp"
#include "rqpe/ci_dims.hpp"
#include "rqpe/ipea.hpp"
#include "rqpe/asp.hpp"
#include "rqpe/qsd.hpp"
#include "rqpe/sbh.hpp"
#include "rqpe/io.hpp"
