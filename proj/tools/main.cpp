// Copyright 2026 The Solvkit Authors
// SPDX-License-Identifier: Apache-2.0

int main() { return 2; }
