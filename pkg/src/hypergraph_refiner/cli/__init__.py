"""命令行层。"""
