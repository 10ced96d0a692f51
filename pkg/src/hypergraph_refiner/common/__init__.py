"""跨层共享的常量、错误基类与路径工具。"""
