from agentplay.games.buttonmaze import ButtonMaze, generate_level, load_level_csv, save_level_csv
from agentplay.games.minidungeon import GameConfig, MiniDungeon, new_minidungeon

__all__ = [
    "ButtonMaze",
    "GameConfig",
    "MiniDungeon",
    "generate_level",
    "load_level_csv",
    "new_minidungeon",
    "save_level_csv",
]
