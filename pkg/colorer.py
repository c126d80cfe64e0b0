#!/usr/bin/env python3
import linecolor

if __name__ == "__main__":
    linecolor.cli.run()
